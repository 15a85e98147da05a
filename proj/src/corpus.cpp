#include "sciclass/corpus.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "sciclass/errors.hpp"

namespace sciclass {
namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n\v\f");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n\v\f");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void row_error(const std::string& path, std::size_t line,
                            const std::string& what) {
  throw DataError(path + ": line " + std::to_string(line) + ": " + what);
}

std::string tsv_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string tsv_unescape(const std::string& s, const std::string& path,
                         std::size_t line) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out += s[i];
      continue;
    }
    if (i + 1 == s.size()) row_error(path, line, "dangling escape character");
    switch (s[++i]) {
      case '\\': out += '\\'; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default: row_error(path, line, std::string("unknown escape \\") + s[i]);
    }
  }
  return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Reads one CSV record (possibly spanning lines inside quoted fields).
// Returns false at end of input. `line` tracks the record's first line.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields,
                     std::size_t& line, std::size_t& next_line,
                     const std::string& path) {
  fields.clear();
  int c = in.get();
  if (c == EOF) return false;
  line = next_line;
  std::string field;
  bool quoted = false;
  for (;;) {
    if (c == EOF) {
      if (quoted) row_error(path, line, "unterminated quoted field");
      fields.push_back(field);
      return true;
    }
    char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        int peek = in.peek();
        if (peek == '"') {
          in.get();
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++next_line;
        field += ch;
      }
    } else if (ch == '"' && field.empty()) {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(field);
      field.clear();
    } else if (ch == '\n') {
      ++next_line;
      if (!field.empty() && field.back() == '\r') field.pop_back();
      fields.push_back(field);
      return true;
    } else {
      field += ch;
    }
    c = in.get();
  }
}

Document make_document(std::string id, std::string label_field,
                       std::string text, const std::string& path,
                       std::size_t line) {
  Document doc;
  doc.id = std::move(id);
  if (doc.id.empty()) row_error(path, line, "empty document id");
  std::string label = trim(label_field);
  if (!label.empty()) {
    auto parsed = label_from_code(label);
    if (!parsed) row_error(path, line, "unknown label code \"" + label + "\"");
    doc.label = *parsed;
  }
  doc.text = std::move(text);
  if (trim(doc.text).empty()) row_error(path, line, "empty document text");
  return doc;
}

std::vector<Document> load_tsv(std::istream& in, const std::string& path) {
  std::vector<Document> docs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    if (fields.size() != 3)
      row_error(path, lineno,
                "expected 3 tab-separated fields (id, label, text), got " +
                    std::to_string(fields.size()));
    docs.push_back(make_document(fields[0], fields[1],
                                 tsv_unescape(fields[2], path, lineno), path,
                                 lineno));
  }
  return docs;
}

std::vector<Document> load_csv(std::istream& in, const std::string& path) {
  std::vector<Document> docs;
  std::vector<std::string> fields;
  std::size_t line = 0, next_line = 1;
  while (read_csv_record(in, fields, line, next_line, path)) {
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    if (fields.size() != 3)
      row_error(path, line, "expected 3 comma-separated fields, got " +
                                std::to_string(fields.size()));
    docs.push_back(make_document(fields[0], fields[1], fields[2], path, line));
  }
  return docs;
}

std::vector<Document> load_jsonl(std::istream& in, const std::string& path) {
  std::vector<Document> docs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    json record = json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object())
      row_error(path, lineno, "invalid JSON object");
    if (!record.contains("id") || !record["id"].is_string())
      row_error(path, lineno, "missing string field \"id\"");
    if (!record.contains("text") || !record["text"].is_string())
      row_error(path, lineno, "missing string field \"text\"");
    std::string label;
    if (record.contains("label") && !record["label"].is_null()) {
      if (!record["label"].is_string())
        row_error(path, lineno, "field \"label\" must be a string or null");
      label = record["label"].get<std::string>();
    }
    docs.push_back(make_document(record["id"].get<std::string>(), label,
                                 record["text"].get<std::string>(), path,
                                 lineno));
  }
  return docs;
}

}  // namespace

std::optional<CorpusFormat> corpus_format_from_name(const std::string& name) {
  if (name == "tsv") return CorpusFormat::Tsv;
  if (name == "csv") return CorpusFormat::Csv;
  if (name == "jsonl") return CorpusFormat::Jsonl;
  return std::nullopt;
}

Corpus load_corpus(const std::string& path, CorpusFormat format,
                   const std::string& split_name) {
  if (split_name != "train" && split_name != "validation" &&
      split_name != "test")
    throw ConfigError("unknown split name \"" + split_name + "\"");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path + ": cannot open file");

  Corpus corpus;
  corpus.split_name = split_name;
  switch (format) {
    case CorpusFormat::Tsv: corpus.documents = load_tsv(in, path); break;
    case CorpusFormat::Csv: corpus.documents = load_csv(in, path); break;
    case CorpusFormat::Jsonl: corpus.documents = load_jsonl(in, path); break;
  }
  if (corpus.documents.empty()) throw DataError(path + ": empty corpus");

  std::unordered_set<std::string> seen;
  const bool labels_required = split_name != "test";
  for (const Document& doc : corpus.documents) {
    if (!seen.insert(doc.id).second)
      throw DataError(path + ": duplicate document id \"" + doc.id + "\"");
    if (labels_required && !doc.label)
      throw DataError(path + ": document \"" + doc.id +
                      "\" has no label but split \"" + split_name +
                      "\" requires labels");
  }
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& path,
                 CorpusFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path + ": cannot open file for writing");
  for (const Document& doc : corpus.documents) {
    const std::string label =
        doc.label ? std::string(label_code(*doc.label)) : std::string();
    switch (format) {
      case CorpusFormat::Tsv:
        out << tsv_escape(doc.id) << '\t' << label << '\t'
            << tsv_escape(doc.text) << '\n';
        break;
      case CorpusFormat::Csv:
        out << csv_quote(doc.id) << ',' << label << ',' << csv_quote(doc.text)
            << '\n';
        break;
      case CorpusFormat::Jsonl: {
        json record;
        record["id"] = doc.id;
        record["label"] = doc.label ? json(label) : json(nullptr);
        record["text"] = doc.text;
        out << record.dump() << '\n';
        break;
      }
    }
  }
  if (!out) throw DataError(path + ": write failed");
}

std::map<ClassLabel, std::size_t> class_counts(const Corpus& corpus) {
  std::map<ClassLabel, std::size_t> counts;
  for (ClassLabel label : all_labels()) counts[label] = 0;
  for (const Document& doc : corpus.documents) {
    if (!doc.label)
      throw DataError("document \"" + doc.id + "\" has no label");
    ++counts[*doc.label];
  }
  return counts;
}

}  // namespace sciclass
