#include "intricacy/law_io.hpp"

#include <fstream>
#include <sstream>

namespace intricacy {

nlohmann::json law_to_json(const SystemLaw& law) {
  nlohmann::json doc;
  doc["d"] = law.d();
  doc["N"] = law.n();
  if (law.is_dense()) {
    doc["dense"] = std::vector<double>(law.dense_probabilities().begin(),
                                       law.dense_probabilities().end());
    return doc;
  }
  const WeightedPoints& points = law.sparse_points();
  auto support = nlohmann::json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto pt = points.point(i);
    support.push_back({{"config", std::vector<std::uint32_t>(pt.begin(), pt.end())},
                       {"p", points.weights[i]}});
  }
  doc["support"] = std::move(support);
  return doc;
}

SystemLaw law_from_json(const nlohmann::json& doc) {
  try {
    if (!doc.is_object()) throw ValidationError("law document must be a JSON object");
    const int d = doc.at("d").get<int>();
    const int n = doc.at("N").get<int>();
    if (n < 1) throw ValidationError("N must be at least 1");
    const bool has_dense = doc.contains("dense");
    const bool has_support = doc.contains("support");
    if (has_dense == has_support) {
      throw ValidationError("law must have exactly one of \"dense\" or \"support\"");
    }
    if (has_dense) return SystemLaw::dense(d, n, doc.at("dense").get<std::vector<double>>());
    std::vector<std::pair<Configuration, double>> support;
    for (const auto& entry : doc.at("support")) {
      support.emplace_back(entry.at("config").get<Configuration>(), entry.at("p").get<double>());
    }
    return SystemLaw::sparse(d, n, support);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed law JSON: ") + e.what());
  }
}

SystemLaw read_law_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open law file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("cannot parse " + path.string() + ": " + e.what());
  }
  return law_from_json(doc);
}

void write_law_file(const SystemLaw& law, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << law_to_json(law).dump(1) << '\n';
}

}  // namespace intricacy
