#include <doctest.h>

#include "sciclass/stopwords.hpp"
#include "sciclass/textprep.hpp"

using namespace sciclass;

TEST_CASE("tokenize splits on whitespace and strips edge punctuation") {
  CHECK(tokenize("Hello, world!") ==
        std::vector<std::string>{"Hello", "world"});
  CHECK(tokenize("a  b\tc\nd") == std::vector<std::string>{"a", "b", "c", "d"});
  CHECK(tokenize("(bracketed) [terms] \"quoted\"") ==
        std::vector<std::string>{"bracketed", "terms", "quoted"});
  CHECK(tokenize("state-of-the-art co-design") ==
        std::vector<std::string>{"state-of-the-art", "co-design"});
  CHECK(tokenize("ends.") == std::vector<std::string>{"ends"});
  CHECK(tokenize("3.5 works") == std::vector<std::string>{"3.5", "works"});
}

TEST_CASE("tokenize drops pure punctuation and empty input") {
  CHECK(tokenize("").empty());
  CHECK(tokenize("   \t\n  ").empty());
  CHECK(tokenize("... --- !!!").empty());
}

TEST_CASE("tokenize treats unicode whitespace as separators") {
  // U+00A0 no-break space and U+2003 em space between words.
  CHECK(tokenize("alpha\xc2\xa0"
                 "beta\xe2\x80\x83"
                 "gamma") ==
        std::vector<std::string>{"alpha", "beta", "gamma"});
}

TEST_CASE("tokenize keeps non-ascii word content intact") {
  CHECK(tokenize("naïve approach") ==
        std::vector<std::string>{"naïve", "approach"});
}

TEST_CASE("lowercase folds ascii only") {
  CHECK(lowercase("MiXeD") == "mixed");
  CHECK(lowercase("ÉTÉ") == "ÉtÉ");  // ascii T folds, non-ascii bytes untouched
  CHECK(lowercase("A1-B2") == "a1-b2");
}

TEST_CASE("normalize lowercases, removes stopwords, optionally stems") {
  const StopwordSet stops = builtin_stopwords();
  const std::vector<std::string> tokens = {"The", "Running",
                                           "systems", "are", "fast"};
  CHECK(normalize(tokens, stops, false) ==
        std::vector<std::string>{"running", "systems", "fast"});
  CHECK(normalize(tokens, stops, true) ==
        std::vector<std::string>{"run", "system", "fast"});
}

TEST_CASE("normalize without stopword removal keeps everything") {
  const std::vector<std::string> tokens = {"The", "cat"};
  CHECK(normalize(tokens, {}, false) ==
        std::vector<std::string>{"the", "cat"});
}

TEST_CASE("normalize is idempotent when stemming is off") {
  const StopwordSet stops = builtin_stopwords();
  const std::vector<std::string> inputs[] = {
      {"The", "Quick", "BROWN", "fox"},
      {"once", "upon", "a", "time"},
      {"ALGORITHMS", "and", "Datastructures"},
  };
  for (const auto& tokens : inputs) {
    const auto once = normalize(tokens, stops, false);
    CHECK(normalize(once, stops, false) == once);
  }
}

TEST_CASE("split_sentences breaks on terminator plus capital") {
  const auto sents =
      split_sentences("d1", "First sentence here. Second one follows? Yes!");
  REQUIRE(sents.size() == 3);
  CHECK(sents[0].text == "First sentence here.");
  CHECK(sents[1].text == "Second one follows?");
  CHECK(sents[2].text == "Yes!");
  CHECK(sents[0].doc_id == "d1");
  CHECK(sents[0].index == 0);
  CHECK(sents[2].index == 2);
  CHECK(sents[0].token_count == 3);
}

TEST_CASE("split_sentences needs the capital to break") {
  // "e.g. lowercase" must not split; a digit after the period must.
  const auto sents = split_sentences("d1", "We use e.g. toy data. 4 cases follow.");
  REQUIRE(sents.size() == 2);
  CHECK(sents[0].text == "We use e.g. toy data.");
  CHECK(sents[1].text == "4 cases follow.");
}

TEST_CASE("split_sentences treats newlines as spaces") {
  const auto sents =
      split_sentences("d1", "Line one stays.\nStill goes?\nNo. Second here.");
  REQUIRE(sents.size() == 4);
  CHECK(sents[0].text == "Line one stays.");
  CHECK(sents[1].text == "Still goes?");
  CHECK(sents[2].text == "No.");
  CHECK(sents[3].text == "Second here.");
}

TEST_CASE("split_sentences without a boundary yields one sentence") {
  const auto sents = split_sentences("d1", "no terminal punctuation at all");
  REQUIRE(sents.size() == 1);
  CHECK(sents[0].text == "no terminal punctuation at all");
  CHECK(sents[0].token_count == 5);
}

TEST_CASE("split_sentences on blank text yields nothing") {
  CHECK(split_sentences("d1", "").empty());
  CHECK(split_sentences("d1", "   \n  ").empty());
}

TEST_CASE("split_sentences token counts use the raw tokenizer") {
  const auto sents = split_sentences("d1", "Alpha, beta; gamma. Next one.");
  REQUIRE(sents.size() == 2);
  CHECK(sents[0].token_count == 3);
  CHECK(sents[1].token_count == 2);
}
