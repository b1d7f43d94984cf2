#include "bergman/dyadic.hpp"
#include "bergman/error.hpp"

namespace bergman {

namespace {

nlohmann::json point_json(const CVec& v) {
  nlohmann::json a = nlohmann::json::array();
  for (int i = 0; i < v.dim(); ++i) {
    a.push_back(v[i].real());
    a.push_back(v[i].imag());
  }
  return a;
}

SystemPtr system_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind");
  if (kind == "arcs") return std::make_shared<ArcSystem>(j.at("base").get<int>(), j.at("shift").get<int>(), j.at("levels").get<int>());
  if (kind == "net") {
    std::array<cplx, 4> rot;
    const auto& r = j.at("rotation");
    if (r.size() != 4) throw ConfigError("tree json: rotation must have 4 entries");
    for (int i = 0; i < 4; ++i) rot[i] = cplx(r[i].at(0).get<double>(), r[i].at(1).get<double>());
    std::vector<NetSystem::Level> levels;
    for (const auto& L : j.at("cells")) {
      NetSystem::Level lv;
      for (const auto& c : L.at("centers"))
        lv.centers.push_back(CVec{cplx(c.at(0).get<double>(), c.at(1).get<double>()),
                                  cplx(c.at(2).get<double>(), c.at(3).get<double>())});
      for (const auto& p : L.at("parents")) lv.parent.push_back(p.get<std::size_t>());
      if (lv.parent.size() != lv.centers.size()) throw ConfigError("tree json: parents/centers size mismatch");
      levels.push_back(std::move(lv));
    }
    return NetSystem::from_levels(std::move(levels), j.at("calibre").get<double>(), rot);
  }
  throw ConfigError("tree json: unknown system kind '" + kind + "'");
}

}  // namespace

nlohmann::json BergmanTree::to_json() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& nd : nodes_)
    nodes.push_back({{"id", nd.id},
                     {"generation", nd.generation},
                     {"cell", nd.cell},
                     {"parent", nd.parent},
                     {"children", nd.children},
                     {"center", point_json(nd.center.vec())}});
  return {{"format", "bergman-tree/1"},
          {"dimension", dimension()},
          {"theta", theta_},
          {"lambda", lambda_},
          {"max_depth", max_depth_},
          {"system", system_->to_json()},
          {"nodes", nodes}};
}

BergmanTree BergmanTree::from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", std::string()) != "bergman-tree/1") throw ConfigError("tree json: unknown format");
    BergmanTree t = build(system_from_json(j.at("system")), j.at("theta").get<double>(), j.at("lambda").get<double>(),
                          j.at("max_depth").get<int>());
    const auto& nodes = j.at("nodes");
    if (nodes.size() != t.size()) throw ConfigError("tree json: node count differs from the rebuilt tree");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& a = nodes[i];
      const auto& b = t.nodes_[i];
      if (a.at("generation").get<int>() != b.generation || a.at("cell").get<std::size_t>() != b.cell ||
          a.at("parent").get<int>() != b.parent)
        throw ConfigError("tree json: node " + std::to_string(i) + " differs from the rebuilt tree");
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("tree json: ") + e.what());
  }
}

}  // namespace bergman
