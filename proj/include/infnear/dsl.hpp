#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "infnear/dual_graph.hpp"
#include "infnear/errors.hpp"
#include "infnear/synthesis.hpp"
#include "infnear/weighted.hpp"

// Text format:
//
//   cluster NAME { O ; p1 -> O ; q1 -> p1 ; w -> q1, p1 }
//   weights NAME { O=1 p1=1 q1=1 }
//
// The first target after '->' is the parent. '#' starts a comment.

namespace infnear {

class ParseError : public InputError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : InputError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

namespace dsl {

inline bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.';
}

inline bool is_name(std::string_view s) { return !s.empty() && std::all_of(s.begin(), s.end(), is_name_char); }

struct Token {
  enum class Kind { kName, kInteger, kArrow, kLBrace, kRBrace, kSemicolon, kComma, kEquals, kEnd };
  Kind kind = Kind::kEnd;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      t.kind = Token::Kind::kArrow;
      t.text = "->";
      advance(2);
    } else if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i + (c == '-' ? 1 : 0);
      const std::size_t digits_start = j;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j == digits_start) throw ParseError(line, col, "expected a digit after '-'");
      if (j < src.size() && is_name_char(src[j]) && c != '-') {
        while (j < src.size() && is_name_char(src[j])) ++j;
        t.kind = Token::Kind::kName;
      } else {
        t.kind = Token::Kind::kInteger;
      }
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (is_name_char(c)) {
      std::size_t j = i;
      while (j < src.size() && is_name_char(src[j])) ++j;
      t.kind = Token::Kind::kName;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else {
      switch (c) {
        case '{': t.kind = Token::Kind::kLBrace; break;
        case '}': t.kind = Token::Kind::kRBrace; break;
        case ';': t.kind = Token::Kind::kSemicolon; break;
        case ',': t.kind = Token::Kind::kComma; break;
        case '=': t.kind = Token::Kind::kEquals; break;
        default: throw ParseError(line, col, std::string("unexpected character '") + c + "'");
      }
      t.text = std::string(1, c);
      advance(1);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

class Cursor {
 public:
  explicit Cursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek() const { return tokens_[pos_]; }
  bool at(Token::Kind k) const { return peek().kind == k; }
  bool done() const { return at(Token::Kind::kEnd); }
  Token take() { return tokens_[pos_ == tokens_.size() - 1 ? pos_ : pos_++]; }
  Token expect(Token::Kind k, std::string_view what) {
    if (!at(k)) fail("expected " + std::string(what));
    return take();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const auto& t = peek();
    throw ParseError(t.line, t.column, msg + (t.kind == Token::Kind::kEnd ? " at end of input" : ", found '" + t.text + "'"));
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

inline std::int64_t to_int(const Token& t) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc{} || ptr != t.text.data() + t.text.size()) throw ParseError(t.line, t.column, "integer out of range");
  return v;
}

}  // namespace dsl

/// One named cluster from a DSL file. `skeleton` may violate the cluster
/// axioms (unknown targets become kMissingTarget); callers validate it.
struct ClusterDocument {
  std::string name;
  ClusterSkeleton skeleton;
  Weights nu;
  bool has_weights = false;

  WeightedCluster cluster() const { return WeightedCluster(skeleton, nu); }
};

inline std::vector<ClusterDocument> parse_clusters(std::string_view text) {
  using K = dsl::Token::Kind;
  dsl::Cursor cur(dsl::tokenize(text));
  std::vector<ClusterDocument> docs;
  std::map<std::string, std::size_t> by_name;

  while (!cur.done()) {
    auto keyword = cur.expect(K::kName, "'cluster' or 'weights'");
    if (keyword.text == "cluster") {
      auto name = cur.expect(K::kName, "cluster name");
      if (by_name.count(name.text)) throw ParseError(name.line, name.column, "cluster '" + name.text + "' defined twice");
      cur.expect(K::kLBrace, "'{'");
      struct Pending {
        dsl::Token tag;
        std::vector<dsl::Token> targets;
      };
      std::vector<Pending> points;
      while (!cur.at(K::kRBrace)) {
        if (cur.at(K::kSemicolon)) {
          cur.take();
          continue;
        }
        Pending p{cur.expect(K::kName, "point tag"), {}};
        if (cur.at(K::kArrow)) {
          cur.take();
          p.targets.push_back(cur.expect(K::kName, "proximity target"));
          while (cur.at(K::kComma)) {
            cur.take();
            p.targets.push_back(cur.expect(K::kName, "proximity target"));
          }
        }
        points.push_back(std::move(p));
        if (!cur.at(K::kRBrace)) cur.expect(K::kSemicolon, "';' or '}'");
      }
      cur.take();
      if (points.empty()) throw ParseError(name.line, name.column, "cluster '" + name.text + "' has no points");
      std::map<std::string, std::size_t> index;
      for (std::size_t i = 0; i < points.size(); ++i) index.emplace(points[i].tag.text, i);
      std::vector<RawPoint> raw;
      for (const auto& p : points) {
        RawPoint r{p.tag.text, {}};
        for (const auto& t : p.targets) {
          auto it = index.find(t.text);
          r.proximities.push_back(it == index.end() ? kMissingTarget : it->second);
        }
        raw.push_back(std::move(r));
      }
      ClusterDocument doc{name.text, ClusterSkeleton::from_raw(std::move(raw)), {}, false};
      doc.nu.assign(points.size(), 0);
      by_name[name.text] = docs.size();
      docs.push_back(std::move(doc));
    } else if (keyword.text == "weights") {
      auto name = cur.expect(K::kName, "cluster name");
      auto it = by_name.find(name.text);
      if (it == by_name.end())
        throw ParseError(name.line, name.column, "weights for unknown cluster '" + name.text + "'");
      auto& doc = docs[it->second];
      if (doc.has_weights) throw ParseError(name.line, name.column, "weights for '" + name.text + "' given twice");
      doc.has_weights = true;
      cur.expect(K::kLBrace, "'{'");
      std::vector<bool> seen(doc.nu.size(), false);
      while (!cur.at(K::kRBrace)) {
        auto tag = cur.expect(K::kName, "point tag");
        cur.expect(K::kEquals, "'='");
        auto value = cur.expect(K::kInteger, "integer multiplicity");
        auto p = doc.skeleton.find(tag.text);
        if (!p) throw ParseError(tag.line, tag.column, "unknown point '" + tag.text + "'");
        if (seen[p->index]) throw ParseError(tag.line, tag.column, "weight of '" + tag.text + "' given twice");
        seen[p->index] = true;
        doc.nu[p->index] = dsl::to_int(value);
        if (cur.at(K::kSemicolon) || cur.at(K::kComma)) cur.take();
      }
      cur.take();
    } else {
      throw ParseError(keyword.line, keyword.column, "expected 'cluster' or 'weights', found '" + keyword.text + "'");
    }
  }
  return docs;
}

/// Parses a file that must hold exactly one valid cluster.
inline WeightedCluster parse_cluster(std::string_view text) {
  auto docs = parse_clusters(text);
  if (docs.size() != 1) throw InputError("expected exactly one cluster, found " + std::to_string(docs.size()));
  docs.front().skeleton.require_valid();
  return docs.front().cluster();
}

inline std::string serialize(const ClusterSkeleton& s, const std::string& name) {
  if (!dsl::is_name(name)) throw InputError("'" + name + "' cannot be written as a cluster name");
  std::string out = "cluster " + name + " {";
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& p = s.raw()[i];
    if (!dsl::is_name(p.tag)) throw InputError("'" + p.tag + "' cannot be written as a point tag");
    out += i == 0 ? " " : " ; ";
    out += p.tag;
    for (std::size_t j = 0; j < p.proximities.size(); ++j) {
      const auto q = p.proximities[j];
      if (q >= s.size()) throw InputError("cannot write a proximity to a missing point");
      out += (j == 0 ? " -> " : ", ") + s.raw()[q].tag;
    }
  }
  out += " }\n";
  return out;
}

inline std::string serialize(const WeightedCluster& k, const std::string& name) {
  std::string out = serialize(k.skeleton, name);
  out += "weights " + name + " {";
  for (std::size_t i = 0; i < k.size(); ++i) out += " " + k.skeleton.raw()[i].tag + "=" + std::to_string(k.nu[i]);
  out += " }\n";
  return out;
}

namespace dot {

inline std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace dot

/// Enriques-diagram view: parent edges solid, other proximities dashed.
/// Nodes are labelled tag:multiplicity.
inline std::string enriques_dot(const WeightedCluster& k, const std::string& name) {
  std::ostringstream out;
  out << "digraph " << dot::quoted(name) << " {\n  node [shape=circle];\n";
  for (std::size_t i = 0; i < k.size(); ++i)
    out << "  " << dot::quoted(k.skeleton.label(i)) << " [label=" << dot::quoted(k.skeleton.label(i) + ":" + std::to_string(k.nu[i]))
        << "];\n";
  for (std::size_t i = 0; i < k.size(); ++i) {
    const auto& prox = k.skeleton.raw()[i].proximities;
    for (std::size_t j = 0; j < prox.size(); ++j) {
      out << "  " << dot::quoted(k.skeleton.label(prox[j])) << " -> " << dot::quoted(k.skeleton.label(i));
      if (j > 0) out << " [style=dashed]";
      out << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

/// Dual-graph view with the self-intersection weights as labels.
inline std::string dual_dot(const ClusterSkeleton& s, const DualGraph& g, const std::string& name) {
  std::ostringstream out;
  out << "graph " << dot::quoted(name) << " {\n";
  for (auto v : g.vertices())
    out << "  " << dot::quoted(s.label(v)) << " [label=" << dot::quoted(s.label(v) + " (" + std::to_string(g.weight(v)) + ")")
        << "];\n";
  for (auto [a, b] : g.edges()) out << "  " << dot::quoted(s.label(a)) << " -- " << dot::quoted(s.label(b)) << ";\n";
  out << "}\n";
  return out.str();
}

/// Graph spec format: `edge A B` and `weight A=n` lines, '#' comments.
inline MinimalGraphSpec parse_graph_spec(std::string_view text) {
  MinimalGraphSpec g;
  std::map<std::string, std::size_t> index;
  std::vector<std::optional<int>> weights;
  auto vertex = [&](const std::string& n) {
    auto [it, fresh] = index.emplace(n, g.names.size());
    if (fresh) {
      g.names.push_back(n);
      weights.emplace_back();
    }
    return it->second;
  };
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto tokens = dsl::tokenize(line);
    using K = dsl::Token::Kind;
    auto fail = [&](const dsl::Token& t, const std::string& msg) { throw ParseError(line_no, t.column, msg); };
    if (tokens.front().kind == K::kEnd) continue;
    const auto& head = tokens.front();
    if (head.kind == K::kName && head.text == "edge") {
      if (tokens.size() != 4 || tokens[1].kind != K::kName || tokens[2].kind != K::kName)
        fail(head, "expected 'edge A B'");
      auto a = vertex(tokens[1].text), b = vertex(tokens[2].text);
      if (a == b) fail(tokens[2], "loop at '" + tokens[1].text + "'");
      g.edges.emplace_back(a, b);
    } else if (head.kind == K::kName && head.text == "weight") {
      if (tokens.size() != 5 || tokens[1].kind != K::kName || tokens[2].kind != K::kEquals || tokens[3].kind != K::kInteger)
        fail(head, "expected 'weight A=n'");
      auto v = vertex(tokens[1].text);
      if (weights[v]) fail(tokens[1], "weight of '" + tokens[1].text + "' given twice");
      const auto w = dsl::to_int(tokens[3]);
      if (w < std::numeric_limits<int>::min() || w > std::numeric_limits<int>::max()) fail(tokens[3], "weight out of range");
      weights[v] = static_cast<int>(w);
    } else {
      fail(head, "expected 'edge' or 'weight'");
    }
  }
  for (std::size_t i = 0; i < g.names.size(); ++i) {
    if (!weights[i]) throw InputError("vertex '" + g.names[i] + "' has no weight");
    g.weights.push_back(*weights[i]);
  }
  return g;
}

inline std::string serialize(const MinimalGraphSpec& g) {
  std::string out;
  for (std::size_t i = 0; i < g.size(); ++i) out += "weight " + g.names[i] + "=" + std::to_string(g.weights[i]) + "\n";
  for (auto [a, b] : g.edges) out += "edge " + g.names[a] + " " + g.names[b] + "\n";
  return out;
}

}  // namespace infnear
