#include "tensortopo/jones.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <unordered_map>

namespace tensortopo {

LaurentPoly LaurentPoly::monomial(int half_exponent, long long coefficient) {
  LaurentPoly p;
  p.add(half_exponent, coefficient);
  return p;
}

void LaurentPoly::add(int half_exponent, long long coefficient) {
  if (coefficient == 0) return;
  auto& c = terms_[half_exponent];
  c += coefficient;
  if (c == 0) terms_.erase(half_exponent);
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
  LaurentPoly r = *this;
  for (const auto& [e, c] : o.terms_) r.add(e, c);
  return r;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  LaurentPoly r;
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) r.add(e1 + e2, c1 * c2);
  return r;
}

LaurentPoly LaurentPoly::mirrored() const {
  LaurentPoly r;
  for (const auto& [e, c] : terms_) r.add(-e, c);
  return r;
}

std::string LaurentPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    const long long mag = std::llabs(c);
    if (first)
      s += c < 0 ? "-" : "";
    else
      s += c < 0 ? " - " : " + ";
    first = false;
    if (e == 0) {
      s += std::to_string(mag);
      continue;
    }
    if (mag != 1) s += std::to_string(mag);
    s += "t";
    if (e == 2) continue;
    s += "^";
    s += e % 2 == 0 ? std::to_string(e / 2) : std::to_string(e) + "/2";
  }
  return s;
}

LaurentPoly LaurentPoly::parse(const std::string& text) {
  LaurentPoly p;
  std::string compact;
  for (char ch : text)
    if (ch != ' ') compact += ch;
  if (compact == "0") return p;
  std::size_t i = 0;
  auto fail = [&] { throw ConfigError("cannot parse Laurent polynomial '" + text + "'"); };
  while (i < compact.size()) {
    int sign = 1;
    if (compact[i] == '+' || compact[i] == '-') {
      sign = compact[i] == '-' ? -1 : 1;
      ++i;
    } else if (i != 0) {
      fail();
    }
    long long coef = 1;
    const std::size_t digits = i;
    while (i < compact.size() && std::isdigit(static_cast<unsigned char>(compact[i]))) ++i;
    if (i > digits) coef = std::stoll(compact.substr(digits, i - digits));
    int half = 0;
    if (i < compact.size() && compact[i] == 't') {
      ++i;
      half = 2;
      if (i < compact.size() && compact[i] == '^') {
        ++i;
        std::size_t j = i;
        if (j < compact.size() && compact[j] == '-') ++j;
        while (j < compact.size() && std::isdigit(static_cast<unsigned char>(compact[j]))) ++j;
        if (j == i || (j == i + 1 && compact[i] == '-')) fail();
        const int num = std::stoi(compact.substr(i, j - i));
        i = j;
        if (i + 1 < compact.size() && compact[i] == '/' && compact[i + 1] == '2') {
          i += 2;
          half = num;
        } else {
          half = 2 * num;
        }
      }
    } else if (i == digits) {
      fail();
    }
    p.add(half, sign * coef);
  }
  return p;
}

namespace {

using APoly = std::map<int, long long>;

void add_into(APoly& p, int e, long long c) {
  if (c == 0) return;
  auto& v = p[e];
  v += c;
  if (v == 0) p.erase(e);
}

APoly multiply(const APoly& a, const APoly& b) {
  APoly r;
  for (const auto& [e1, c1] : a)
    for (const auto& [e2, c2] : b) add_into(r, e1 + e2, c1 * c2);
  return r;
}

APoly shift(const APoly& a, int k, long long sign = 1) {
  APoly r;
  for (const auto& [e, c] : a) r[e + k] = c * sign;
  return r;
}

const APoly kLoop{{-2, -1}, {2, -1}};  // d = -A^2 - A^-2

APoly loop_power(int n) {
  APoly r{{0, 1}};
  for (int i = 0; i < n; ++i) r = multiply(r, kLoop);
  return r;
}

// Bracket expansion over the remaining crossings. Every edge label occurs
// exactly twice among the crossing ends; smoothings identify labels.
class Bracket {
 public:
  // Returns the bracket with one factor d per closed loop.
  APoly eval(std::vector<std::array<int, 4>> xs) {
    if (xs.empty()) return APoly{{0, 1}};
    canonicalize(xs);
    const auto key = flatten(xs);
    if (const auto it = memo_.find(key); it != memo_.end()) return it->second;

    // Kinks resolve to a monomial: adjacent ends already joined.
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const auto x = xs[k];
      for (int i = 0; i < 4; ++i) {
        if (x[i] != x[(i + 1) % 4]) continue;
        auto rest = xs;
        rest.erase(rest.begin() + static_cast<long>(k));
        const int p = x[(i + 2) % 4], q = x[(i + 3) % 4];
        const bool closes = p == q;
        relabel(rest, q, p);
        // i even: positions (a,b) or (c,d) joined -> -A^3; odd -> -A^-3.
        APoly r = shift(eval(rest), i % 2 == 0 ? 3 : -3, -1);
        if (closes) r = multiply(r, kLoop);
        return memo_[key] = r;
      }
    }

    const auto x = xs.back();
    xs.pop_back();
    APoly total;
    for (int smoothing = 0; smoothing < 2; ++smoothing) {
      // A joins (a,b),(c,d); B joins (a,d),(b,c).
      const std::array<std::array<int, 2>, 2> pairs =
          smoothing == 0 ? std::array<std::array<int, 2>, 2>{{{x[0], x[1]}, {x[2], x[3]}}}
                         : std::array<std::array<int, 2>, 2>{{{x[0], x[3]}, {x[1], x[2]}}};
      auto rest = xs;
      int loops = 0;
      std::array<std::array<int, 2>, 2> ps = pairs;
      for (int j = 0; j < 2; ++j) {
        const int u = ps[j][0], v = ps[j][1];
        if (u == v) {
          ++loops;
          continue;
        }
        relabel(rest, v, u);
        for (auto& q : ps)
          for (int& e : q)
            if (e == v) e = u;
      }
      APoly term = shift(multiply(eval(rest), loop_power(loops)), smoothing == 0 ? 1 : -1);
      for (const auto& [e, c] : term) add_into(total, e, c);
    }
    return memo_[key] = total;
  }

 private:
  static void relabel(std::vector<std::array<int, 4>>& xs, int from, int to) {
    for (auto& x : xs)
      for (int& e : x)
        if (e == from) e = to;
  }
  static void canonicalize(std::vector<std::array<int, 4>>& xs) {
    std::unordered_map<int, int> id;
    for (auto& x : xs)
      for (int& e : x) e = id.emplace(e, static_cast<int>(id.size())).first->second;
  }
  static std::string flatten(const std::vector<std::array<int, 4>>& xs) {
    std::string s;
    s.reserve(xs.size() * 16);
    for (const auto& x : xs)
      for (int e : x) {
        s += std::to_string(e);
        s += ',';
      }
    return s;
  }
  std::unordered_map<std::string, APoly> memo_;
};

}  // namespace

std::map<int, long long> kauffman_bracket(const PdCode& pd) {
  Bracket b;
  // eval counts every closed loop including the last one; free loops add one
  // factor each. The normalization <O> = 1 removes one factor of d.
  if (pd.crossings.empty() && pd.free_loops == 0) return APoly{{0, 1}};
  APoly all = multiply(b.eval(pd.crossings), loop_power(pd.free_loops));
  // Divide by d = -A^-2 (A^4 + 1): exact long division on ascending powers.
  APoly q;
  APoly rem = shift(all, 2, -1);  // all / (-A^-2)
  const int top = rem.empty() ? 0 : rem.rbegin()->first;
  while (!rem.empty()) {
    const auto [e, c] = *rem.begin();
    add_into(q, e, c);
    add_into(rem, e, -c);
    add_into(rem, e + 4, -c);
    if (e > top) throw TopologyError("kauffman_bracket: not divisible by the loop value");
  }
  return q;
}

JonesResult jones_polynomial(const LinkDiagram& d, int max_crossings) {
  const LinkDiagram s = simplify_diagram(d);
  JonesResult r;
  r.crossings = static_cast<int>(s.crossings.size());
  if (r.crossings > max_crossings) return r;
  const auto bracket = kauffman_bracket(pd_code(s));
  const int w = s.writhe();
  // (-A^3)^-w <D>, then A^k = t^(-k/4), i.e. half-exponent -k/2.
  LaurentPoly v;
  const long long sign = (w % 2 == 0) ? 1 : -1;
  for (const auto& [e, c] : bracket) {
    const int k = e - 3 * w;
    if (k % 2 != 0) throw TopologyError("jones_polynomial: odd A exponent");
    v.add(-k / 2, sign * c);
  }
  r.polynomial = v;
  return r;
}

std::string to_string(KnotState k) {
  switch (k) {
    case KnotState::Knotted: return "knotted";
    case KnotState::Unknotted: return "unknotted";
    case KnotState::Unresolved: return "unresolved";
  }
  return "?";
}

KnotAnalysis is_knotted(const Polyline3& loop, std::uint64_t seed, int max_crossings) {
  if (!loop.closed) throw ConfigError("is_knotted: curve must be closed");
  KnotAnalysis a;
  const JonesResult j = jones_polynomial(project_to_diagram({loop}, seed), max_crossings);
  a.crossings = j.crossings;
  a.jones = j.polynomial;
  if (j.polynomial) a.state = j.polynomial->is_one() ? KnotState::Unknotted : KnotState::Knotted;
  return a;
}

}  // namespace tensortopo
