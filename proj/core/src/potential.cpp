#include "symdyn/potential.hpp"

#include <cmath>
#include <limits>

#include "symdyn/error.hpp"

namespace symdyn {

namespace {

std::size_t ipow(std::size_t k, std::size_t e) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= k;
  return r;
}

std::size_t code_of(WordView w, std::size_t k) {
  std::size_t c = 0;
  for (Symbol a : w) c = c * k + a;
  return c;
}

}  // namespace

Potential::Potential(std::size_t k, std::size_t range, std::vector<double> values)
    : k_(k), range_(range), values_(std::move(values)) {
  if (range_ < 1) throw Error(ErrorKind::invalid_argument, "potential range must be >= 1");
  if (k_ == 0 || range_ > 8 || values_.size() != ipow(k_, range_))
    throw Error(ErrorKind::invalid_argument, "potential table must have k^r entries");
  bool any = false;
  zero_ = true;
  for (double v : values_) {
    if (std::isnan(v)) continue;
    if (std::isinf(v)) throw Error(ErrorKind::invalid_argument, "potential values must be finite");
    if (!any) {
      max_ = min_ = v;
      any = true;
    }
    max_ = std::max(max_, v);
    min_ = std::min(min_, v);
    if (v != 0.0) zero_ = false;
  }
}

Potential Potential::zero(std::size_t k) { return Potential(k, 1, std::vector<double>(k, 0.0)); }

Potential Potential::constant(std::size_t k, std::size_t range, double c) {
  return Potential(k, range, std::vector<double>(ipow(k, range), c));
}

Potential Potential::indicator(std::size_t k, const Word& pattern, double t) {
  if (pattern.empty()) throw Error(ErrorKind::invalid_argument, "indicator pattern must be nonempty");
  std::vector<double> v(ipow(k, pattern.size()), 0.0);
  v[code_of(pattern, k)] = t;
  return Potential(k, pattern.size(), std::move(v));
}

double Potential::value(WordView window) const {
  if (window.size() != range_) throw Error(ErrorKind::invalid_argument, "window length differs from range");
  return values_[code_of(window, k_)];
}

double Potential::sup_abs() const noexcept { return std::max(std::fabs(max_), std::fabs(min_)); }

void Potential::check_total(const LanguageOracle& oracle) const {
  if (oracle.k() != k_) throw Error(ErrorKind::invalid_argument, "potential alphabet size differs from shift");
  for (const Word& w : oracle.enumerate(range_))
    if (std::isnan(value(w)))
      throw Error(ErrorKind::invalid_argument,
                  "potential has no value on admissible window '" + oracle.alphabet().format(w) + "'");
}

double distortion_bound(const Potential& phi) {
  return static_cast<double>(phi.range() - 1) * (phi.max_value() - phi.min_value());
}

double TailTable::interior(const Potential& phi, WordView w) {
  const std::size_t r = phi.range();
  double s = 0.0;
  for (std::size_t j = 0; j + r <= w.size(); ++j) s += phi.value(w.subspan(j, r));
  return s;
}

TailTable::TailTable(const Potential& phi, const LanguageOracle& oracle) : phi_(&phi), oracle_(&oracle) {
  const std::size_t m = phi.range() - 1;
  const std::size_t k = oracle.k();
  const std::size_t total = ipow(k, m);
  completions_.reserve(total);
  for (std::size_t c = 0; c < total; ++c) {
    Word v(m);
    std::size_t x = c;
    for (std::size_t i = m; i-- > 0;) {
      v[i] = static_cast<Symbol>(x % k);
      x /= k;
    }
    completions_.push_back(std::move(v));
  }
}

double TailTable::tail(Dfa::State q, WordView suffix) const {
  const std::size_t r = phi_->range();
  if (r == 1 || suffix.empty()) return 0.0;
  const Dfa& dfa = oracle_->dfa();
  Word x(suffix.begin(), suffix.end());
  const std::size_t base = x.size();
  x.resize(base + r - 1);
  auto windows = [&](const Word& v) {
    std::copy(v.begin(), v.end(), x.begin() + static_cast<std::ptrdiff_t>(base));
    double s = 0.0;
    for (std::size_t j = 0; j < base; ++j) s += phi_->value(WordView(x).subspan(j, r));
    return s;
  };
  double best = -std::numeric_limits<double>::infinity();
  bool found = false;
  for (const Word& v : completions_) {
    Dfa::State t = dfa.run(v, q);
    if (t == Dfa::kUnexplored)
      throw Error(ErrorKind::depth_exceeded, "completion beyond certified depth");
    if (t < 0) continue;
    double s = windows(v);
    if (std::isnan(s)) continue;
    best = std::max(best, s);
    found = true;
  }
  if (!found) {
    // Word without admissible completion: fall back to all defined completions.
    for (const Word& v : completions_) {
      double s = windows(v);
      if (!std::isnan(s)) best = std::max(best, s);
    }
  }
  return best;
}

double phi_hat(const Potential& phi, const LanguageOracle& oracle, WordView w) {
  if (w.empty()) return 0.0;
  Dfa::State q = oracle.state_of(w);
  if (q < 0) throw Error(ErrorKind::not_in_language, "phi_hat of '" + oracle.alphabet().format(w) + "'");
  if (phi.is_zero()) return 0.0;
  const std::size_t m = std::min(w.size(), phi.range() - 1);
  TailTable tails(phi, oracle);
  return TailTable::interior(phi, w) + tails.tail(q, w.subspan(w.size() - m));
}

double periodic_sum(const Potential& phi, WordView p) {
  const std::size_t r = phi.range();
  const std::size_t n = p.size();
  if (n == 0) return 0.0;
  Word window(r);
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < r; ++i) window[i] = p[(j + i) % n];
    s += phi.value(window);
  }
  return s;
}

}  // namespace symdyn
