#include "compsemi/word_parser.hpp"

#include <cctype>
#include <optional>

namespace compsemi {

namespace {

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  Combination combination() {
    Complex c0 = 0.0;
    std::vector<std::pair<Complex, Word>> terms;
    double sign = 1.0;
    for (;;) {
      term(sign, c0, terms);
      skip_space();
      if (at_end()) break;
      if (peek() == '+')
        sign = 1.0;
      else if (peek() == '-')
        sign = -1.0;
      else
        throw ParseError("expected '+' or '-'", pos_);
      ++pos_;
    }
    return Combination(c0, std::move(terms));
  }

  Word word_only() {
    skip_space();
    std::optional<Word> w = product();
    if (!w) throw ParseError("expected 'I' or a letter C(s) / C*(s)", pos_);
    skip_space();
    if (!at_end()) throw ParseError("unexpected trailing input", pos_);
    return *w;
  }

private:
  void term(double sign, Complex& c0, std::vector<std::pair<Complex, Word>>& terms) {
    skip_space();
    if (at_end()) throw ParseError("expected a term", pos_);
    double coeff = sign;
    bool have_number = false;
    if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
      coeff *= number();
      have_number = true;
      skip_space();
      if (at_end() || peek() != '*') {
        c0 += coeff;
        return;
      }
      ++pos_;
      skip_space();
    }
    const std::size_t start = pos_;
    std::optional<Word> w = product();
    if (!w) {
      throw ParseError(have_number ? "expected 'I' or a letter after '*'" : "expected a number, 'I' or a letter",
                       start);
    }
    if (w->is_identity())
      c0 += coeff;
    else
      terms.emplace_back(coeff, *w);
  }

  std::optional<Word> product() {
    if (at_end()) return std::nullopt;
    if (peek() == 'I') {
      ++pos_;
      return Word({Letter{1, false}, Letter{1, true}});
    }
    std::vector<Letter> letters;
    for (;;) {
      skip_space();
      if (at_end() || peek() != 'C') break;
      letters.push_back(letter());
    }
    if (letters.empty()) return std::nullopt;
    return Word(std::move(letters));
  }

  Letter letter() {
    ++pos_;  // 'C'
    bool adjoint = false;
    if (!at_end() && peek() == '*') {
      adjoint = true;
      ++pos_;
    }
    expect('(');
    skip_space();
    const std::size_t start = pos_;
    while (!at_end() && peek() != ')') ++pos_;
    std::string_view body = text_.substr(start, pos_ - start);
    while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.remove_suffix(1);
    Rational s;
    try {
      s = parse_rational(body);
    } catch (const ParseError& e) {
      throw ParseError("malformed parameter", start + e.position());
    }
    if (!(s > 0 && s <= 1)) throw ParseError("parameter s must lie in (0, 1]", start);
    expect(')');
    return Letter{s, adjoint};
  }

  double number() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.' || peek() == 'e' ||
                         peek() == 'E' || peek() == '/' ||
                         ((peek() == '+' || peek() == '-') && pos_ > start &&
                          (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E'))))
      ++pos_;
    try {
      return to_double(parse_rational(text_.substr(start, pos_ - start)));
    } catch (const ParseError& e) {
      throw ParseError("malformed number", start + e.position());
    }
  }

  void expect(char c) {
    skip_space();
    if (at_end() || peek() != c) throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Combination parse_combination(std::string_view text) { return Parser(text).combination(); }

Word parse_word(std::string_view text) { return Parser(text).word_only(); }

}  // namespace compsemi
