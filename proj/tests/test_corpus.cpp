#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "sciclass/corpus.hpp"
#include "sciclass/errors.hpp"

using namespace sciclass;

namespace {

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& name, const std::string& content) {
    path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
  }
  ~TempFile() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("tsv corpus loads ids, labels, and text") {
  TempFile f("corpus_basic.tsv",
             "d1\tCL\tfirst document text\n"
             "d2\tSE\tsecond document text\n");
  const Corpus corpus = load_corpus(f.path.string(), CorpusFormat::Tsv, "train");
  REQUIRE(corpus.documents.size() == 2);
  CHECK(corpus.documents[0].id == "d1");
  CHECK(corpus.documents[0].label == ClassLabel::CL);
  CHECK(corpus.documents[0].text == "first document text");
  CHECK(corpus.documents[1].label == ClassLabel::SE);
  CHECK(corpus.split_name == "train");
}

TEST_CASE("tsv escapes round-trip through save and load") {
  Corpus corpus;
  corpus.split_name = "train";
  corpus.documents = {
      {"d1", "tab\there and\nnewline and \\ backslash", ClassLabel::DS},
      {"d2", "carriage\rreturn", ClassLabel::NI},
  };
  const auto path = std::filesystem::temp_directory_path() / "corpus_rt.tsv";
  save_corpus(corpus, path.string(), CorpusFormat::Tsv);
  CHECK(load_corpus(path.string(), CorpusFormat::Tsv, "train") == corpus);
  std::filesystem::remove(path);
}

TEST_CASE("csv round-trips quoted fields with commas, quotes, newlines") {
  Corpus corpus;
  corpus.split_name = "validation";
  corpus.documents = {
      {"d1", "plain text", ClassLabel::CL},
      {"d2", "comma, inside", ClassLabel::CR},
      {"d3", "a \"quoted\" word", ClassLabel::DC},
      {"d4", "line one\nline two", ClassLabel::DS},
  };
  const auto path = std::filesystem::temp_directory_path() / "corpus_rt.csv";
  save_corpus(corpus, path.string(), CorpusFormat::Csv);
  CHECK(load_corpus(path.string(), CorpusFormat::Csv, "validation") == corpus);
  std::filesystem::remove(path);
}

TEST_CASE("jsonl round-trips unicode text") {
  Corpus corpus;
  corpus.split_name = "train";
  corpus.documents = {
      {"d1", "épsilon and naïve words", ClassLabel::LO},
      {"d2", "plain ascii", ClassLabel::SE},
  };
  const auto path = std::filesystem::temp_directory_path() / "corpus_rt.jsonl";
  save_corpus(corpus, path.string(), CorpusFormat::Jsonl);
  CHECK(load_corpus(path.string(), CorpusFormat::Jsonl, "train") == corpus);
  std::filesystem::remove(path);
}

TEST_CASE("duplicate document ids are rejected with the id named") {
  TempFile f("corpus_dup.tsv", "d1\tCL\ttext a\nd1\tCR\ttext b\n");
  CHECK_THROWS_WITH_AS(load_corpus(f.path.string(), CorpusFormat::Tsv, "train"),
                       doctest::Contains("duplicate document id \"d1\""),
                       DataError);
}

TEST_CASE("unknown label codes are rejected with line and code") {
  TempFile f("corpus_badlabel.tsv", "d1\tZZ\tsome text\n");
  CHECK_THROWS_WITH_AS(load_corpus(f.path.string(), CorpusFormat::Tsv, "train"),
                       doctest::Contains("unknown label code \"ZZ\""),
                       DataError);
}

TEST_CASE("train split requires labels, test split does not") {
  TempFile f("corpus_nolabel.tsv", "d1\t\tsome text\n");
  CHECK_THROWS_AS(load_corpus(f.path.string(), CorpusFormat::Tsv, "train"),
                  DataError);
  const Corpus corpus =
      load_corpus(f.path.string(), CorpusFormat::Tsv, "test");
  REQUIRE(corpus.documents.size() == 1);
  CHECK_FALSE(corpus.documents[0].label.has_value());
}

TEST_CASE("empty file and empty text are rejected") {
  TempFile empty("corpus_empty.tsv", "");
  CHECK_THROWS_WITH_AS(
      load_corpus(empty.path.string(), CorpusFormat::Tsv, "train"),
      doctest::Contains("empty corpus"), DataError);
  TempFile blank_text("corpus_blank.tsv", "d1\tCL\t   \n");
  CHECK_THROWS_WITH_AS(
      load_corpus(blank_text.path.string(), CorpusFormat::Tsv, "train"),
      doctest::Contains("empty document text"), DataError);
}

TEST_CASE("malformed rows cite their line number") {
  TempFile f("corpus_malformed.tsv", "d1\tCL\tgood text\nonly-one-field\n");
  CHECK_THROWS_WITH_AS(load_corpus(f.path.string(), CorpusFormat::Tsv, "train"),
                       doctest::Contains("line 2"), DataError);
}

TEST_CASE("unknown split names are rejected") {
  TempFile f("corpus_split.tsv", "d1\tCL\ttext\n");
  CHECK_THROWS_AS(load_corpus(f.path.string(), CorpusFormat::Tsv, "dev"),
                  ConfigError);
}

TEST_CASE("class_counts covers all seven classes") {
  Corpus corpus;
  corpus.split_name = "train";
  corpus.documents = {{"d1", "a", ClassLabel::CL},
                      {"d2", "b", ClassLabel::CL},
                      {"d3", "c", ClassLabel::SE}};
  const auto counts = class_counts(corpus);
  CHECK(counts.size() == kNumClasses);
  CHECK(counts.at(ClassLabel::CL) == 2);
  CHECK(counts.at(ClassLabel::SE) == 1);
  CHECK(counts.at(ClassLabel::DS) == 0);
}

TEST_CASE("class_counts refuses unlabeled documents") {
  Corpus corpus;
  corpus.split_name = "test";
  corpus.documents = {{"d1", "a", std::nullopt}};
  CHECK_THROWS_AS(class_counts(corpus), DataError);
}

TEST_CASE("corpus_format_from_name parses known names only") {
  CHECK(corpus_format_from_name("tsv") == CorpusFormat::Tsv);
  CHECK(corpus_format_from_name("csv") == CorpusFormat::Csv);
  CHECK(corpus_format_from_name("jsonl") == CorpusFormat::Jsonl);
  CHECK_FALSE(corpus_format_from_name("parquet").has_value());
}

TEST_CASE("the bundled fixture corpora load cleanly") {
  const std::string dir = SCICLASS_FIXTURE_DIR;
  const Corpus train =
      load_corpus(dir + "/fixture_train.tsv", CorpusFormat::Tsv, "train");
  CHECK(train.documents.size() == 60);
  const Corpus valid =
      load_corpus(dir + "/fixture_valid.tsv", CorpusFormat::Tsv, "validation");
  CHECK(valid.documents.size() == 21);
  const auto counts = class_counts(train);
  std::size_t total = 0;
  for (const auto& [label, count] : counts) total += count;
  CHECK(total == 60);
}
