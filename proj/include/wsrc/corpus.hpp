#pragma once

#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "wsrc/error.hpp"

namespace wsrc {

struct RawDocument {
  std::string id;
  std::string title;
  std::string snippet;
  std::optional<std::string> label;

  bool operator==(const RawDocument&) const = default;
};

// Documents in file order; index i identifies document i everywhere downstream.
struct Corpus {
  std::vector<RawDocument> documents;

  std::size_t size() const noexcept { return documents.size(); }
  bool empty() const noexcept { return documents.empty(); }
  const RawDocument& operator[](std::size_t i) const { return documents[i]; }

  bool has_labels() const {
    if (documents.empty()) return false;
    for (const auto& d : documents)
      if (!d.label) return false;
    return true;
  }

  std::vector<std::string> ids() const {
    std::vector<std::string> out;
    out.reserve(documents.size());
    for (const auto& d : documents) out.push_back(d.id);
    return out;
  }

  std::vector<std::optional<std::string>> labels() const {
    std::vector<std::optional<std::string>> out;
    out.reserve(documents.size());
    for (const auto& d : documents) out.push_back(d.label);
    return out;
  }
};

inline nlohmann::json to_json(const RawDocument& doc) {
  nlohmann::json j = {{"id", doc.id}, {"title", doc.title}, {"snippet", doc.snippet}};
  if (doc.label) j["label"] = *doc.label;
  return j;
}

namespace detail {

inline std::string optional_string_field(const nlohmann::json& obj, const char* key,
                                         std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_string())
    throw DataError("line " + std::to_string(line_no) + ": field \"" + key + "\" must be a string");
  return it->get<std::string>();
}

}  // namespace detail

// Parses line-delimited JSON records. Blank lines are skipped; line numbers in
// errors are 1-based and count blank lines.
inline Corpus parse_corpus(std::istream& in) {
  Corpus corpus;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError("line " + std::to_string(line_no) + ": malformed JSON (" + e.what() + ")");
    }
    if (!obj.is_object()) throw DataError("line " + std::to_string(line_no) + ": expected a JSON object");
    auto id_it = obj.find("id");
    if (id_it == obj.end() || !id_it->is_string() || id_it->get<std::string>().empty())
      throw DataError("line " + std::to_string(line_no) + ": missing or non-string \"id\"");

    RawDocument doc;
    doc.id = id_it->get<std::string>();
    doc.title = detail::optional_string_field(obj, "title", line_no);
    doc.snippet = detail::optional_string_field(obj, "snippet", line_no);
    if (auto label = detail::optional_string_field(obj, "label", line_no); !label.empty())
      doc.label = std::move(label);
    if (doc.title.empty() && doc.snippet.empty())
      throw DataError("line " + std::to_string(line_no) + ": document \"" + doc.id +
                      "\" has neither title nor snippet");
    if (!seen.insert(doc.id).second)
      throw DataError("line " + std::to_string(line_no) + ": duplicate id \"" + doc.id + "\"");
    corpus.documents.push_back(std::move(doc));
  }
  if (corpus.empty()) throw DataError("empty corpus");
  return corpus;
}

inline Corpus load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset: " + path);
  return parse_corpus(in);
}

inline void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& doc : corpus.documents) out << to_json(doc).dump() << '\n';
}

}  // namespace wsrc
