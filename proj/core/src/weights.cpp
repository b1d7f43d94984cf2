#include "bergman/weights.hpp"

#include "bergman/error.hpp"

#include <cmath>
#include <sstream>

namespace bergman {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

void require_p(double p, const char* who) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError(std::string(who) + ": p must lie in (1, inf)");
}

}  // namespace

double conjugate_exponent(double p) {
  require_p(p, "conjugate_exponent");
  return p / (p - 1.0);
}

Weight Weight::labelled(std::string kind, std::string prov, nlohmann::json desc) const {
  return with_meta(std::move(kind), std::move(prov), std::move(desc));
}

Weight Weight::with_meta(std::string kind, std::string prov, nlohmann::json desc) const {
  Weight w = *this;
  w.kind_ = std::move(kind);
  w.provenance_ = std::move(prov);
  w.desc_ = std::move(desc);
  return w;
}

Weight Weight::constant(int n, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw ParameterError("constant weight must be positive and finite");
  Weight w;
  w.n_ = n;
  w.log_scale_ = std::log(c);
  return w.with_meta("constant", num(c), {{"kind", "constant"}, {"value", c}});
}

Weight Weight::power(int n, double exponent) {
  Weight w;
  w.n_ = n;
  w.edge_ = exponent;
  return w.with_meta("power", "(1-|z|^2)^" + num(exponent), {{"kind", "power"}, {"exponent", exponent}});
}

Weight Weight::sharp(double delta, int n, double b) {
  if (!(delta > 0.0 && delta <= 1.0)) throw ParameterError("sharp weight: delta must lie in (0, 1]");
  const double e = (n + 1 + b) * (1.0 - delta);
  Weight w;
  w.n_ = n;
  if (e != 0.0) w.sing_ = {{CVec::unit(n, 0), e}, {CVec::unit(n, 0) * -1.0, -e}};
  return w.with_meta("sharp", "sharp(delta=" + num(delta) + ", b=" + num(b) + ")",
                     {{"kind", "sharp"}, {"delta", delta}, {"b", b}});
}

Weight Weight::singular(int n, std::vector<Singular> points, double edge) {
  Weight w;
  w.n_ = n;
  w.edge_ = edge;
  nlohmann::json pts = nlohmann::json::array();
  for (auto& s : points) {
    if (s.zeta.dim() != n) throw ParameterError("singular weight: dimension mismatch");
    s.zeta = BoundaryPoint(s.zeta).vec();
    nlohmann::json d = nlohmann::json::array();
    for (int i = 0; i < n; ++i) {
      d.push_back(s.zeta[i].real());
      d.push_back(s.zeta[i].imag());
    }
    pts.push_back({{"direction", d}, {"exponent", s.kappa}});
  }
  w.sing_ = std::move(points);
  return w.with_meta("singular", "product weight", {{"kind", "singular"}, {"points", pts}, {"edge", edge}});
}

Weight Weight::custom(int n, std::function<double(const BallPoint&)> g, std::string provenance) {
  if (!g) throw ParameterError("custom weight: empty evaluator");
  Weight w;
  w.n_ = n;
  w.custom_ = std::move(g);
  w.custom_power_ = 1.0;
  return w.with_meta("custom", provenance, {{"kind", "custom"}, {"provenance", provenance}});
}

double Weight::log_value(const BallPoint& z) const {
  double s = log_scale_;
  if (edge_ != 0.0) s += edge_ * std::log(z.defect());
  for (const auto& p : sing_) s += p.kappa * std::log(std::abs(1.0 - pairing(z.vec(), p.zeta)));
  if (custom_) {
    const double g = custom_(z);
    if (!(g > 0.0) || !std::isfinite(g))
      throw EvaluationError("weight '" + provenance_ + "' is not positive and finite at " + to_string(z.vec()));
    s += custom_power_ * std::log(g);
  }
  return s;
}

double Weight::operator()(const BallPoint& z) const {
  const double v = std::exp(log_value(z));
  if (!(v > 0.0) || !std::isfinite(v))
    throw EvaluationError("weight '" + provenance_ + "' overflows at " + to_string(z.vec()));
  return v;
}

Weight Weight::pow(double e) const {
  Weight w = *this;
  w.log_scale_ *= e;
  w.edge_ *= e;
  for (auto& s : w.sing_) s.kappa *= e;
  w.custom_power_ *= e;
  return w.with_meta(kind_, "(" + provenance_ + ")^" + num(e), {{"kind", "pow"}, {"e", e}, {"of", desc_}});
}

Weight Weight::scaled(double c) const {
  if (!(c > 0.0)) throw ParameterError("weight scaling must be positive");
  Weight w = *this;
  w.log_scale_ += std::log(c);
  return w.with_meta(kind_, num(c) + "*" + provenance_, {{"kind", "scaled"}, {"c", c}, {"of", desc_}});
}

Weight Weight::times_defect(double e) const {
  Weight w = *this;
  w.edge_ += e;
  return w.with_meta(kind_, provenance_ + "*(1-|z|^2)^" + num(e),
                     {{"kind", "times_defect"}, {"e", e}, {"of", desc_}});
}

SingularityHint Weight::hint(const CVec& anchor) const {
  SingularityHint h;
  h.edge = edge_;
  for (const auto& s : sing_)
    if ((s.zeta - anchor).norm() < 1e-12) h.point += s.kappa;
  return h;
}

Weight dual_weight(const Weight& u, double p) {
  const double e = -conjugate_exponent(p) / p;
  return u.pow(e).labelled("dual", "dual_p=" + num(p) + "(" + u.provenance() + ")",
                           {{"kind", "dual"}, {"p", p}, {"of", u.descriptor()}});
}

Weight tilde_weight(const Weight& u, double p, double a) {
  require_p(p, "tilde_weight");
  return u.times_defect(p * a).labelled("tilde", "tilde_p=" + num(p) + ",a=" + num(a) + "(" + u.provenance() + ")",
                                       {{"kind", "tilde"}, {"p", p}, {"a", a}, {"of", u.descriptor()}});
}

std::pair<Weight, Weight> psi_nu_transform(const Weight& u, double p, double a, double b) {
  const double q = conjugate_exponent(p);
  const std::string tag = "p=" + num(p) + ",a=" + num(a) + ",b=" + num(b) + "(" + u.provenance() + ")";
  const nlohmann::json args = {{"p", p}, {"a", a}, {"b", b}, {"of", u.descriptor()}};
  nlohmann::json dpsi = args, dnu = args;
  dpsi["kind"] = "psi";
  dnu["kind"] = "nu";
  Weight psi = u.pow(-q / p).times_defect(-(q * b + p * a) / p).labelled("psi", "psi_" + tag, dpsi);
  Weight nu = psi.pow(-p / q).labelled("nu", "nu_" + tag, dnu);
  return {psi, nu};
}

Weight sharp_weight(double delta, int n, double b) { return Weight::sharp(delta, n, b); }

Weight Weight::from_json(const nlohmann::json& j, int n) {
  try {
    const std::string kind = j.at("kind");
    if (kind == "constant") return constant(n, j.value("value", 1.0));
    if (kind == "power") {
      if (j.contains("exponent")) return power(n, j.at("exponent").get<double>());
      // (1-|z|^2)^{t-b}
      return power(n, j.at("t").get<double>() - j.value("b", 0.0));
    }
    if (kind == "sharp") return sharp(j.at("delta").get<double>(), j.value("n", n), j.value("b", 0.0));
    if (kind == "singular") {
      std::vector<Singular> pts;
      for (const auto& q : j.at("points")) {
        const auto& d = q.at("direction");
        if (d.size() != static_cast<std::size_t>(2 * n)) throw ConfigError("singular weight: direction needs 2n reals");
        CVec v(n);
        for (int i = 0; i < n; ++i) v[i] = cplx(d[2 * i].get<double>(), d[2 * i + 1].get<double>());
        pts.push_back({v, q.at("exponent").get<double>()});
      }
      return singular(n, std::move(pts), j.value("edge", 0.0));
    }
    if (kind == "pow") return from_json(j.at("of"), n).pow(j.at("e").get<double>());
    if (kind == "scaled") return from_json(j.at("of"), n).scaled(j.at("c").get<double>());
    if (kind == "times_defect") return from_json(j.at("of"), n).times_defect(j.at("e").get<double>());
    if (kind == "dual") return dual_weight(from_json(j.at("of"), n), j.at("p").get<double>());
    if (kind == "tilde") return tilde_weight(from_json(j.at("of"), n), j.at("p").get<double>(), j.at("a").get<double>());
    if (kind == "psi" || kind == "nu") {
      auto pr = psi_nu_transform(from_json(j.at("of"), n), j.at("p").get<double>(), j.at("a").get<double>(),
                                 j.at("b").get<double>());
      return kind == "psi" ? pr.first : pr.second;
    }
    if (kind == "custom") throw ConfigError("custom weights cannot be built from a descriptor");
    throw ConfigError("unknown weight kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("weight descriptor: ") + e.what());
  }
}

}  // namespace bergman
