#include "sciclass/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sciclass/errors.hpp"

namespace sciclass {

namespace {

[[noreturn]] void line_error(const std::filesystem::path& path,
                             std::size_t line, const std::string& what) {
  throw DataError("embeddings " + path.string() + " line " +
                  std::to_string(line) + ": " + what);
}

double parse_value(const std::filesystem::path& path, std::size_t line,
                   std::string_view text) {
  double value = 0.0;
  const auto [end, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size())
    line_error(path, line, "bad float \"" + std::string(text) + "\"");
  if (!std::isfinite(value))
    line_error(path, line, "non-finite value \"" + std::string(text) + "\"");
  return value;
}

std::string format_value(double value) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

}  // namespace

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embeddings file " + path.string());

  EmbeddingTable table;
  std::string line;
  if (!std::getline(in, line))
    throw DataError("embeddings " + path.string() + ": missing dim= header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.rfind("dim=", 0) != 0)
    line_error(path, 1, "expected dim=<D> header, got \"" + line + "\"");
  {
    const std::string_view digits = std::string_view(line).substr(4);
    std::size_t dim = 0;
    const auto [end, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), dim);
    if (ec != std::errc{} || end != digits.data() + digits.size())
      line_error(path, 1, "bad dimension \"" + std::string(digits) + "\"");
    table.dimension = dim;
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      line_error(path, line_no, "expected doc_id<TAB>values");
    std::string doc_id = line.substr(0, tab);
    if (doc_id.empty()) line_error(path, line_no, "empty doc id");

    std::vector<double> vec;
    vec.reserve(table.dimension);
    std::string_view rest = std::string_view(line).substr(tab + 1);
    if (!rest.empty()) {
      std::size_t start = 0;
      while (true) {
        std::size_t comma = rest.find(',', start);
        const std::string_view field =
            comma == std::string_view::npos
                ? rest.substr(start)
                : rest.substr(start, comma - start);
        vec.push_back(parse_value(path, line_no, field));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
    }
    if (vec.size() != table.dimension)
      line_error(path, line_no,
                 "expected " + std::to_string(table.dimension) +
                     " values, got " + std::to_string(vec.size()));
    if (!table.vectors.emplace(std::move(doc_id), std::move(vec)).second)
      line_error(path, line_no, "duplicate doc id");
  }
  return table;
}

void save_embeddings(const EmbeddingTable& table,
                     const std::filesystem::path& path) {
  std::vector<const std::string*> ids;
  ids.reserve(table.vectors.size());
  for (const auto& [id, vec] : table.vectors) {
    if (vec.size() != table.dimension)
      throw DataError("embeddings save: vector for \"" + id +
                      "\" has wrong dimension");
    ids.push_back(&id);
  }
  std::sort(ids.begin(), ids.end(),
            [](const std::string* a, const std::string* b) { return *a < *b; });

  std::ofstream out(path);
  if (!out) throw DataError("cannot write embeddings file " + path.string());
  out << "dim=" << table.dimension << "\n";
  for (const std::string* id : ids) {
    out << *id << '\t';
    const std::vector<double>& vec = table.vectors.at(*id);
    for (std::size_t i = 0; i < vec.size(); ++i) {
      if (i) out << ',';
      out << format_value(vec[i]);
    }
    out << '\n';
  }
  if (!out) throw DataError("write failed for " + path.string());
}

std::vector<double> concat_features(std::span<const double> embedding,
                                    std::span<const double> theta) {
  std::vector<double> out;
  out.reserve(embedding.size() + theta.size());
  out.insert(out.end(), embedding.begin(), embedding.end());
  out.insert(out.end(), theta.begin(), theta.end());
  return out;
}

}  // namespace sciclass
