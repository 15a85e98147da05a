#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "sciclass/errors.hpp"
#include "sciclass/stopwords.hpp"

using namespace sciclass;

TEST_CASE("builtin list has 179 unique lowercase entries") {
  const auto list = builtin_stopword_list();
  CHECK(list.size() == 179);
  const StopwordSet set = builtin_stopwords();
  CHECK(set.size() == list.size());
  for (std::string_view word : list) {
    for (char c : word) {
      CHECK_FALSE((c >= 'A' && c <= 'Z'));
      CHECK(c != ' ');
    }
  }
}

TEST_CASE("builtin set holds function words, not content words") {
  const StopwordSet set = builtin_stopwords();
  CHECK(set.count("the"));
  CHECK(set.count("and"));
  CHECK(set.count("is"));
  CHECK(set.count("wouldn't"));
  CHECK_FALSE(set.count("algorithm"));
  CHECK_FALSE(set.count("network"));
}

TEST_CASE("the shipped stopword file matches the builtin list") {
  const auto path =
      std::filesystem::path(SCICLASS_FIXTURE_DIR).parent_path().parent_path() /
      "data" / "stopwords_en.txt";
  REQUIRE(std::filesystem::exists(path));
  const StopwordSet from_file = load_stopwords(path.string());
  CHECK(from_file == builtin_stopwords());
}

TEST_CASE("load_stopwords lowercases and skips blank lines") {
  const auto path = std::filesystem::temp_directory_path() / "stops_test.txt";
  {
    std::ofstream out(path);
    out << "The\n\nAND\nif\n";
  }
  const StopwordSet set = load_stopwords(path.string());
  CHECK(set == StopwordSet{"the", "and", "if"});
  std::filesystem::remove(path);
}

TEST_CASE("load_stopwords rejects entries containing whitespace") {
  const auto path = std::filesystem::temp_directory_path() / "stops_bad.txt";
  {
    std::ofstream out(path);
    out << "two words\n";
  }
  CHECK_THROWS_AS(load_stopwords(path.string()), DataError);
  std::filesystem::remove(path);
}

TEST_CASE("missing stopword file raises a data error") {
  CHECK_THROWS_AS(load_stopwords("/nonexistent/stopwords.txt"), DataError);
}
