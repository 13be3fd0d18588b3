#include "geolex/text.hpp"

#include <fstream>

#include "geolex/util.hpp"

namespace geolex {

namespace {

bool is_alnum_lower(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// blank every span that starts with the marker and runs to the next whitespace
void blank_url_spans(std::string& s, std::string_view marker) {
  size_t pos = 0;
  while ((pos = s.find(marker, pos)) != std::string::npos) {
    while (pos < s.size() && !is_ascii_space(s[pos])) s[pos++] = ' ';
  }
}

}  // namespace

StopwordSet load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open stopword file: " + path.string());
  StopwordSet set;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || is_ascii_space(line.back())))
      line.pop_back();
    size_t start = 0;
    while (start < line.size() && is_ascii_space(line[start])) ++start;
    if (start > 0) line.erase(0, start);
    if (line.empty() || line[0] == '#') continue;
    for (char& c : line)
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    set.insert(line);
  }
  return set;
}

std::vector<std::string> preprocess(std::string_view text, const StopwordSet& stopwords) {
  std::string s(text);
  for (char& c : s)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  blank_url_spans(s, "http://");
  blank_url_spans(s, "https://");
  blank_url_spans(s, "www.");

  std::vector<std::string> out;
  size_t i = 0, n = s.size();
  while (i < n) {
    if (s[i] == '@') {
      // a mention is dropped whole, handle and all
      size_t j = i + 1;
      while (j < n && (is_alnum_lower(s[j]) || s[j] == '_')) ++j;
      i = (j > i + 1) ? j : i + 1;
      continue;
    }
    if (!is_alnum_lower(s[i])) {
      // every other byte, non-ASCII included, separates tokens
      ++i;
      continue;
    }
    size_t j = i;
    while (j < n && is_alnum_lower(s[j])) ++j;
    std::string token = s.substr(i, j - i);
    i = j;
    if (stopwords.contains(token)) continue;
    // stem until stable; the suffix rules converge in a few passes
    for (int pass = 0; pass < 8; ++pass) {
      std::string next = porter_stem(token);
      if (next == token) break;
      token = std::move(next);
    }
    if (!token.empty() && !stopwords.contains(token)) out.push_back(std::move(token));
  }
  return out;
}

}  // namespace geolex
