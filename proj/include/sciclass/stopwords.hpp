#pragma once

#include <span>
#include <string>
#include <string_view>

#include "sciclass/textprep.hpp"

namespace sciclass {

// The built-in English stopword list (179 entries, lowercase). The same
// list ships as data/stopwords_en.txt; a file supplied at runtime
// overrides it.
std::span<const std::string_view> builtin_stopword_list();

StopwordSet builtin_stopwords();

// One token per line, UTF-8. Entries are lowercased; blank lines are
// skipped. Throws DataError on entries containing whitespace.
StopwordSet load_stopwords(const std::string& path);

}  // namespace sciclass
