#include "arbor/chain_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace arbor {

ChainSpec load_chain_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open chain spec: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("chain spec is not valid JSON: " + std::string(e.what()));
  }
  if (!j.contains("n") || !j["n"].is_number_integer())
    throw std::runtime_error("chain spec: missing or non-integer field \"n\"");
  int n = j["n"].get<int>();
  if (n < 1) throw std::runtime_error("chain spec: \"n\" must be >= 1");
  if (!j.contains("P") || !j["P"].is_array() ||
      j["P"].size() != static_cast<std::size_t>(n))
    throw std::runtime_error("chain spec: \"P\" must be an array of n rows");

  std::vector<double> entries;
  entries.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const auto& row = j["P"][i];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(n))
      throw std::runtime_error("chain spec: row " + std::to_string(i + 1) +
                               " must have length n");
    for (int k = 0; k < n; ++k) {
      if (!row[k].is_number())
        throw std::runtime_error("chain spec: non-numeric entry in row " +
                                 std::to_string(i + 1));
      entries.push_back(row[k].get<double>());
    }
  }
  ChainSpec spec{TransitionMatrix(n, std::move(entries)), {}};
  if (j.contains("labels")) {
    for (const auto& l : j["labels"]) spec.labels.push_back(l.get<std::string>());
  }
  return spec;
}

}  // namespace arbor
