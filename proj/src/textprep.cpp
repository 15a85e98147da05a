#include "sciclass/textprep.hpp"

#include <cctype>

#include "sciclass/stemmer.hpp"

namespace sciclass {
namespace {

bool is_unicode_space(char32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

// Decodes the UTF-8 sequence starting at i; on malformed input the single
// byte is consumed and treated as an opaque non-space character.
char32_t decode_utf8(std::string_view s, std::size_t i, std::size_t& len) {
  const unsigned char b0 = static_cast<unsigned char>(s[i]);
  len = 1;
  if (b0 < 0x80) return b0;
  int extra;
  char32_t cp;
  if ((b0 & 0xE0) == 0xC0) {
    extra = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    extra = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    extra = 3;
    cp = b0 & 0x07;
  } else {
    return 0xFFFD;
  }
  if (i + static_cast<std::size_t>(extra) >= s.size()) return 0xFFFD;
  for (int k = 1; k <= extra; ++k) {
    const unsigned char b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return 0xFFFD;
    cp = (cp << 6) | (b & 0x3F);
  }
  len = static_cast<std::size_t>(extra) + 1;
  return cp;
}

bool is_ascii_punct(char c) {
  const unsigned char u = static_cast<unsigned char>(c);
  return u < 128 && std::ispunct(u);
}

void push_token(std::vector<std::string>& out, std::string_view raw) {
  std::size_t b = 0;
  std::size_t e = raw.size();
  while (b < e && is_ascii_punct(raw[b])) ++b;
  while (e > b && is_ascii_punct(raw[e - 1])) --e;
  if (e > b) out.emplace_back(raw.substr(b, e - b));
}

bool ascii_space(char c) { return std::isspace(static_cast<unsigned char>(c)); }

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t token_start = 0;
  bool in_token = false;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t len = 0;
    const char32_t cp = decode_utf8(text, i, len);
    if (is_unicode_space(cp)) {
      if (in_token) {
        push_token(tokens, text.substr(token_start, i - token_start));
        in_token = false;
      }
    } else if (!in_token) {
      token_start = i;
      in_token = true;
    }
    i += len;
  }
  if (in_token) push_token(tokens, text.substr(token_start));
  return tokens;
}

std::string lowercase(std::string_view token) {
  std::string out(token);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

std::vector<std::string> normalize(const std::vector<std::string>& tokens,
                                   const StopwordSet& stopwords, bool stem) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const std::string& token : tokens) {
    std::string lower = lowercase(token);
    if (stopwords.contains(lower)) continue;
    out.push_back(stem ? porter_stem(lower) : std::move(lower));
  }
  return out;
}

std::vector<Sentence> split_sentences(const std::string& doc_id,
                                      std::string_view text) {
  std::string s(text);
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';

  std::vector<Sentence> sentences;
  auto emit = [&](std::size_t begin, std::size_t end) {
    while (begin < end && ascii_space(s[begin])) ++begin;
    while (end > begin && ascii_space(s[end - 1])) --end;
    if (end == begin) return;
    Sentence sent;
    sent.doc_id = doc_id;
    sent.index = sentences.size();
    sent.text = s.substr(begin, end - begin);
    sent.token_count = tokenize(sent.text).size();
    sentences.push_back(std::move(sent));
  };

  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t after = i + 1;
    if (after >= s.size() || !ascii_space(s[after])) continue;
    while (after < s.size() && ascii_space(s[after])) ++after;
    if (after >= s.size()) continue;
    const unsigned char next = static_cast<unsigned char>(s[after]);
    if (std::isupper(next) || std::isdigit(next)) {
      emit(start, i + 1);
      start = after;
      i = after - 1;
    }
  }
  emit(start, s.size());
  return sentences;
}

}  // namespace sciclass
