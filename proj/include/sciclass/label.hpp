#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace sciclass {

// The seven-class subject schema. The schema is closed: loaders reject any
// other label code. Index order is fixed and used everywhere a class is
// addressed by position (weight rows, confusion matrices, vote counts).
enum class ClassLabel : int { CL = 0, CR, DC, DS, LO, NI, SE };

inline constexpr std::size_t kNumClasses = 7;

inline constexpr std::array<ClassLabel, kNumClasses> all_labels() {
  return {ClassLabel::CL, ClassLabel::CR, ClassLabel::DC, ClassLabel::DS,
          ClassLabel::LO, ClassLabel::NI, ClassLabel::SE};
}

constexpr int label_index(ClassLabel label) { return static_cast<int>(label); }

constexpr ClassLabel label_from_index(int index) {
  return static_cast<ClassLabel>(index);
}

constexpr std::string_view label_code(ClassLabel label) {
  constexpr std::array<std::string_view, kNumClasses> codes = {
      "CL", "CR", "DC", "DS", "LO", "NI", "SE"};
  return codes[static_cast<std::size_t>(label)];
}

constexpr std::string_view label_display_name(ClassLabel label) {
  constexpr std::array<std::string_view, kNumClasses> names = {
      "Computation and Language",
      "Cryptography and Security",
      "Distributed and Cluster Computing",
      "Data Structures and Algorithms",
      "Logic in Computer Science",
      "Networking and Internet Architecture",
      "Software Engineering"};
  return names[static_cast<std::size_t>(label)];
}

constexpr std::optional<ClassLabel> label_from_code(std::string_view code) {
  for (ClassLabel label : all_labels()) {
    if (label_code(label) == code) return label;
  }
  return std::nullopt;
}

}  // namespace sciclass
