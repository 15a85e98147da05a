#pragma once

#include <string>
#include <string_view>

namespace sciclass {

// Porter suffix stripper, matching the reference implementation of the
// classic algorithm (including its step-2 "bli"->"ble" and "logi"->"log"
// amendments, which the published test vocabulary reflects). Words shorter
// than three characters are returned unchanged. Expects lowercase input;
// non-letter bytes are treated as consonants.
std::string porter_stem(std::string_view word);

}  // namespace sciclass
