#include "symdyn/word.hpp"

#include "symdyn/error.hpp"

namespace symdyn {

Word subword(WordView w, std::size_t i, std::size_t j) {
  if (j < i) return {};
  if (i < 1 || j > w.size())
    throw Error(ErrorKind::invalid_argument, "subword range out of bounds");
  return Word(w.begin() + static_cast<std::ptrdiff_t>(i - 1), w.begin() + static_cast<std::ptrdiff_t>(j));
}

Word prefix(WordView w, std::size_t n) {
  n = std::min(n, w.size());
  return Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(n));
}

Word suffix(WordView w, std::size_t n) {
  n = std::min(n, w.size());
  return Word(w.end() - static_cast<std::ptrdiff_t>(n), w.end());
}

Word concat(WordView a, WordView b) {
  Word out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Word concat(WordView a, WordView b, WordView c) {
  Word out;
  out.reserve(a.size() + b.size() + c.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  out.insert(out.end(), c.begin(), c.end());
  return out;
}

Word power(WordView w, std::size_t times) {
  Word out;
  out.reserve(w.size() * times);
  for (std::size_t t = 0; t < times; ++t) out.insert(out.end(), w.begin(), w.end());
  return out;
}

bool starts_with(WordView w, WordView p) {
  return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin());
}

bool ends_with(WordView w, WordView s) {
  return s.size() <= w.size() && std::equal(s.begin(), s.end(), w.end() - static_cast<std::ptrdiff_t>(s.size()));
}

bool contains_factor(WordView w, WordView f) {
  if (f.empty()) return true;
  return std::search(w.begin(), w.end(), f.begin(), f.end()) != w.end();
}

bool has_period(WordView w, std::size_t k) {
  for (std::size_t i = 0; i + k < w.size(); ++i)
    if (w[i] != w[i + k]) return false;
  return true;
}

std::size_t WordHash::operator()(const Word& w) const noexcept {
  std::size_t h = 1469598103934665603ull ^ w.size();
  for (Symbol a : w) {
    h ^= a;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

std::string default_separator(const std::vector<std::string>& symbols) {
  for (const auto& s : symbols)
    if (s.size() != 1) return ",";
  return "";
}

}  // namespace

Alphabet::Alphabet(std::vector<std::string> symbols)
    : Alphabet(symbols, default_separator(symbols)) {}

Alphabet::Alphabet(std::vector<std::string> symbols, std::string separator)
    : symbols_(std::move(symbols)), separator_(std::move(separator)) {
  if (symbols_.empty() || symbols_.size() > 255)
    throw Error(ErrorKind::invalid_argument, "alphabet needs between 1 and 255 symbols");
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i].empty()) throw Error(ErrorKind::invalid_argument, "empty symbol");
    for (std::size_t j = 0; j < i; ++j)
      if (symbols_[i] == symbols_[j])
        throw Error(ErrorKind::invalid_argument, "duplicate symbol '" + symbols_[i] + "'");
  }
}

Alphabet Alphabet::digits(std::size_t k) { return numbered(0, k); }

Alphabet Alphabet::numbered(std::size_t first, std::size_t k) {
  std::vector<std::string> s;
  for (std::size_t i = 0; i < k; ++i) s.push_back(std::to_string(first + i));
  return Alphabet(std::move(s));
}

int Alphabet::index_of(std::string_view s) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i] == s) return static_cast<int>(i);
  return -1;
}

std::string Alphabet::format(WordView w) const {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i > 0) out += separator_;
    out += symbols_.at(w[i]);
  }
  return out;
}

Word Alphabet::parse(std::string_view text) const {
  Word w;
  if (text.empty()) return w;
  if (!separator_.empty()) {
    std::size_t pos = 0;
    while (true) {
      std::size_t end = text.find(separator_, pos);
      std::string_view tok = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
      int a = index_of(tok);
      if (a < 0) throw Error(ErrorKind::invalid_argument, "unknown symbol '" + std::string(tok) + "'");
      w.push_back(static_cast<Symbol>(a));
      if (end == std::string_view::npos) break;
      pos = end + separator_.size();
    }
    return w;
  }
  std::size_t pos = 0;
  while (pos < text.size()) {
    // longest match
    int best = -1;
    std::size_t best_len = 0;
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      const auto& s = symbols_[i];
      if (s.size() > best_len && text.substr(pos, s.size()) == s) {
        best = static_cast<int>(i);
        best_len = s.size();
      }
    }
    if (best < 0)
      throw Error(ErrorKind::invalid_argument, "cannot parse word '" + std::string(text) + "'");
    w.push_back(static_cast<Symbol>(best));
    pos += best_len;
  }
  return w;
}

}  // namespace symdyn
