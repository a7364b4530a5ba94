#include "sexpr.hpp"

#include <cctype>

namespace csam::sexpr {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  Node read(std::size_t depth = 0) {
    skip_space();
    if (pos_ >= text_.size()) throw SyntaxError("unexpected end of input", line_, column_);
    Node node;
    node.line = line_;
    node.column = column_;
    const char c = text_[pos_];
    if (c == ')') throw SyntaxError("unexpected ')'", line_, column_);
    if (c == '(') {
      if (depth >= kMaxDepth) throw SyntaxError("nesting too deep", line_, column_);
      node.is_list = true;
      advance();
      while (true) {
        skip_space();
        if (pos_ >= text_.size()) {
          throw SyntaxError("unterminated list", node.line, node.column);
        }
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        node.items.push_back(read(depth + 1));
      }
      return node;
    }
    while (pos_ < text_.size()) {
      const char d = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ';') break;
      node.atom.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(d))));
      advance();
    }
    return node;
  }

 private:
  static constexpr std::size_t kMaxDepth = 1000;

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

}  // namespace

std::vector<Node> read_all(std::string_view text) {
  Reader reader(text);
  std::vector<Node> out;
  while (!reader.at_end()) out.push_back(reader.read());
  return out;
}

Node read_one(std::string_view text) {
  auto nodes = read_all(text);
  if (nodes.empty()) throw SyntaxError("empty input", 1, 1);
  if (nodes.size() > 1) nodes[1].fail("trailing input after expression");
  return std::move(nodes.front());
}

}  // namespace csam::sexpr
