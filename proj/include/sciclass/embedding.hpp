#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace sciclass {

// Externally computed document vectors, keyed by doc id.
struct EmbeddingTable {
  std::size_t dimension = 0;
  std::unordered_map<std::string, std::vector<double>> vectors;
};

// File format: first line "dim=<D>", then one line per document:
// doc_id<TAB>v1,v2,...,vD. Floats use the shortest round-trip decimal form.
EmbeddingTable load_embeddings(const std::filesystem::path& path);
void save_embeddings(const EmbeddingTable& table,
                     const std::filesystem::path& path);

// Embedding components first, then theta, both orders preserved.
std::vector<double> concat_features(std::span<const double> embedding,
                                    std::span<const double> theta);

}  // namespace sciclass
