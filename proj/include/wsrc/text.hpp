#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "wsrc/error.hpp"

namespace wsrc {

using StopwordSet = std::unordered_set<std::string>;

namespace detail {

// Kept in sync with data/stopwords.txt (checked by the text tests).
inline constexpr std::array kDefaultStopwords = {
    "a", "about", "above", "after", "again", "against", "all", "am", "an",
    "and", "any", "are", "as", "at", "be", "because", "been", "before",
    "being", "below", "between", "both", "but", "by", "can", "could", "did",
    "do", "does", "doing", "down", "during", "each", "few", "for", "from",
    "further", "had", "has", "have", "having", "he", "her", "here", "hers",
    "herself", "him", "himself", "his", "how", "if", "in", "into", "is", "it",
    "its", "itself", "just", "me", "more", "most", "my", "myself", "no", "nor",
    "not", "now", "of", "off", "on", "once", "only", "or", "other", "our",
    "ours", "ourselves", "out", "over", "own", "same", "she", "should", "so",
    "some", "such", "than", "that", "the", "their", "theirs", "them",
    "themselves", "then", "there", "these", "they", "this", "those", "through",
    "to", "too", "under", "until", "up", "very", "was", "we", "were", "what",
    "when", "where", "which", "while", "who", "whom", "why", "will", "with",
    "would", "you", "your", "yours", "yourself", "yourselves"};

inline bool ends_with(std::string_view word, std::string_view suffix) {
  return word.size() >= suffix.size() && word.substr(word.size() - suffix.size()) == suffix;
}

// One application of the suffix rules. Returns true if the word changed.
inline bool strip_suffix_once(std::string& word) {
  const std::string before = word;
  if (ends_with(word, "ies")) {
    word.replace(word.size() - 3, 3, "y");
  } else if (ends_with(word, "sses")) {
    word.erase(word.size() - 2);
  }
  if (ends_with(word, "s") && !ends_with(word, "ss")) word.pop_back();
  if (ends_with(word, "ing") && word.size() - 3 >= 3) {
    word.erase(word.size() - 3);
  } else if (ends_with(word, "ed") && word.size() - 2 >= 3) {
    word.erase(word.size() - 2);
  }
  return word != before;
}

// Bytes >= 0x80 are treated as word characters so UTF-8 words stay whole.
inline bool is_word_byte(unsigned char c) { return std::isalnum(c) != 0 || c >= 0x80; }

}  // namespace detail

inline const StopwordSet& default_stopwords() {
  static const StopwordSet words(detail::kDefaultStopwords.begin(), detail::kDefaultStopwords.end());
  return words;
}

// One lowercase word per line; blank lines are ignored.
inline StopwordSet load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open stopword file: " + path);
  StopwordSet words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    std::size_t start = 0;
    while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start]))) ++start;
    if (start < line.size()) words.insert(line.substr(start));
  }
  return words;
}

// Light suffix stemmer, applied until the word stops changing.
inline std::string stem(std::string word) {
  while (detail::strip_suffix_once(word)) {
  }
  return word;
}

// Lowercase, split on non-alphanumerics, drop short words and stopwords, stem.
// Stemmed output is filtered again so the function is idempotent on its
// space-joined output.
inline std::vector<std::string> preprocess(std::string_view text,
                                           const StopwordSet& stopwords = default_stopwords()) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (current.size() >= 2 && !stopwords.contains(current)) {
      std::string stemmed = stem(std::move(current));
      if (stemmed.size() >= 2 && !stopwords.contains(stemmed)) tokens.push_back(std::move(stemmed));
    }
    current.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (detail::is_word_byte(c)) {
      current.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

}  // namespace wsrc
