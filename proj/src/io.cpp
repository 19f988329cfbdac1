#include "latw/io.hpp"

#include <fstream>

namespace latw {

nlohmann::json table_to_json(const CoordTable& t) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [r, seq] : t) out[std::to_string(r)] = std::vector<double>(seq.values().begin(), seq.values().end());
  return out;
}

nlohmann::json state_to_json(const InvariantState& a) {
  return {{"m", a.m()}, {"N", a.period()}, {"normalization", to_string(a.normalization())}, {"a", table_to_json(a.free())}};
}

InvariantState state_from_json(const nlohmann::json& j) {
  const int m = j.at("m").get<int>();
  const auto n = j.at("N").get<std::size_t>();
  const Normalization norm = parse_normalization(j.value("normalization", std::string("SL")));
  CoordTable a;
  for (const auto& [key, values] : j.at("a").items()) {
    auto v = values.get<std::vector<double>>();
    if (v.size() != n) throw PeriodMismatch("coordinate a^" + key + " does not have N entries");
    a.emplace(std::stoi(key), Seq(std::move(v)));
  }
  return InvariantState(m, n, norm, std::move(a));
}

nlohmann::json polygon_to_json(const TwistedPolygon& g) {
  nlohmann::json vertices = nlohmann::json::array();
  for (const auto& v : g.values()) vertices.push_back(std::vector<double>(v.data(), v.data() + v.size()));
  nlohmann::json monodromy = nlohmann::json::array();
  for (Eigen::Index i = 0; i < g.monodromy().rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(g.monodromy().cols()));
    for (Eigen::Index k = 0; k < g.monodromy().cols(); ++k) row[static_cast<std::size_t>(k)] = g.monodromy()(i, k);
    monodromy.push_back(row);
  }
  return {{"m", g.m()}, {"N", g.period()}, {"vertices", vertices}, {"monodromy", monodromy}};
}

TwistedPolygon polygon_from_json(const nlohmann::json& j) {
  const int m = j.at("m").get<int>();
  const auto n = j.at("N").get<std::size_t>();
  const auto rows = j.at("vertices").get<std::vector<std::vector<double>>>();
  const auto mono = j.at("monodromy").get<std::vector<std::vector<double>>>();
  if (rows.size() != n) throw PeriodMismatch("polygon must list N vertices");
  if (mono.size() != static_cast<std::size_t>(m)) throw DomainError("monodromy must be m x m");
  std::vector<Eigen::VectorXd> vertices;
  for (const auto& r : rows) {
    if (r.size() != static_cast<std::size_t>(m)) throw DomainError("vertex dimension must be m");
    vertices.push_back(Eigen::Map<const Eigen::VectorXd>(r.data(), m));
  }
  Eigen::MatrixXd monodromy(m, m);
  for (int i = 0; i < m; ++i) {
    if (mono[static_cast<std::size_t>(i)].size() != static_cast<std::size_t>(m))
      throw DomainError("monodromy must be m x m");
    for (int k = 0; k < m; ++k) monodromy(i, k) = mono[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
  }
  return TwistedPolygon(std::move(vertices), std::move(monodromy));
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  return nlohmann::json::parse(in);
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace latw
