#include "gms/mt_norm.hpp"

#include <algorithm>
#include <map>

namespace gms {

int effective_j_bound(const FinVector& x, const ParameterSchedule& sched) {
  if (x.is_zero()) throw InvalidArgument("effective_j_bound: zero vector");
  Rational ratio = norm_one(x) / norm_infty(x);
  int j = 0;
  while (Rational(sched.m(j + 1)) <= ratio) ++j;
  return j;
}

namespace {

enum class Choice : std::uint8_t { terminal, bounded, unbounded };

struct Cell {
  Choice choice = Choice::terminal;
  int j = 0;
  int d = 0;   // number of pieces for bounded choices
  int pos = 0; // terminal position
};

class Solver {
 public:
  Solver(const FinVector& x, const ParameterSchedule& sched, const MtOptions& opts)
      : sched_(sched), opts_(opts) {
    for (const auto& [i, v] : x) {
      pos_.push_back(i);
      val_.push_back(gms::abs(v));
      sgn_.push_back(sign(v));
    }
    s_ = static_cast<int>(pos_.size());
    prefix_.assign(s_ + 1, Rational(0));
    for (int i = 0; i < s_; ++i) prefix_[i + 1] = prefix_[i] + val_[i];
    collect_weights();
  }

  NormResult run() {
    N_.assign(cells(), Rational(0));
    cell_.assign(cells(), Cell{});
    arg_q_.assign(static_cast<std::size_t>(dmax_ + 1) * cells(), -1);
    arg_u_.assign(cells(), -1);
    from_u_.assign(cells(), 0);
    for (int a = s_ - 1; a >= 0; --a) fill_row(a);
    NormResult r;
    r.value = N_[at(0, s_ - 1)];
    r.effective_j = effective_j_;
    // Relaxed arities only matter if the optimal tree actually uses them.
    TreeCertificate cert = build(0, s_ - 1);
    r.exact = opts_.arity_relax_threshold == 0 || verify_certificate_structure(cert, sched_).ok;
    if (r.exact) r.certificate = std::move(cert);
    return r;
  }

 private:
  struct Weight {
    int j;
    Rational m;
    Rational w;
    long n;  // arity clamped to s
  };

  std::size_t cells() const { return static_cast<std::size_t>(s_) * s_; }
  std::size_t at(int a, int b) const { return static_cast<std::size_t>(a) * s_ + b; }
  std::size_t at_q(int d, int a, int b) const { return static_cast<std::size_t>(d) * cells() + at(a, b); }

  bool unbounded(const Weight& w, int len) const {
    return w.n >= len || (opts_.arity_relax_threshold > 0 && w.n >= opts_.arity_relax_threshold);
  }

  void collect_weights() {
    // Only m_j < s can ever compete on a piece of at most s coordinates.
    for (int j = 1;; ++j) {
      Integer m = sched_.m(j);
      if (m >= s_) break;
      Weight w{j, Rational(m), Rational(1) / Rational(m), sched_.arity(j, s_)};
      weights_.push_back(w);
      if (!(opts_.arity_relax_threshold > 0 && w.n >= opts_.arity_relax_threshold) && w.n < s_)
        dmax_ = std::max<int>(dmax_, static_cast<int>(w.n));
    }
  }

  void fill_row(int a) {
    const int rows = dmax_ + 1;
    std::vector<std::vector<Rational>> q(rows, std::vector<Rational>(s_));
    std::vector<Rational> u2(s_), b1(s_);
    Rational run_max = 0;
    int run_pos = a;
    for (int b = a; b < s_; ++b) {
      if (val_[b] > run_max) {
        run_max = val_[b];
        run_pos = b;
      }
      const int len = b - a + 1;
      bool have_split = len >= 2;
      if (have_split) {
        for (int d = 2; d <= std::min(dmax_, len); ++d) {
          bool found = false;
          for (int c = a + d - 2; c < b; ++c) {
            Rational v = q[d - 1][c] + N_[at(c + 1, b)];
            if (!found || v > q[d][b]) {
              q[d][b] = v;
              arg_q_[at_q(d, a, b)] = c;
              found = true;
            }
          }
        }
        for (int c = a; c < b; ++c) {
          Rational v = b1[c] + N_[at(c + 1, b)];
          if (c == a || v > u2[b]) {
            u2[b] = v;
            arg_u_[at(a, b)] = c;
          }
        }
      }

      Rational best = run_max;
      Cell cell{Choice::terminal, 0, 0, run_pos};
      Rational l1 = prefix_[b + 1] - prefix_[a];
      if (have_split) {
        for (const auto& w : weights_) {
          if (!(w.m * run_max < l1)) break;
          effective_j_ = std::max(effective_j_, w.j);
          Rational cand;
          Cell c{Choice::unbounded, w.j, 0, 0};
          if (unbounded(w, len)) {
            cand = u2[b] * w.w;
          } else {
            int best_d = 2;
            for (int d = 3; d <= w.n; ++d)
              if (q[d][b] > q[best_d][b]) best_d = d;
            cand = q[best_d][b] * w.w;
            c = Cell{Choice::bounded, w.j, best_d, 0};
          }
          if (cand > best) {
            best = cand;
            cell = c;
          }
        }
      }
      N_[at(a, b)] = best;
      cell_[at(a, b)] = cell;
      if (dmax_ >= 1) q[1][b] = best;
      if (have_split && u2[b] > best) {
        b1[b] = u2[b];
        from_u_[at(a, b)] = 1;
      } else {
        b1[b] = best;
      }
    }
  }

  void pieces_bounded(int a, int b, int d, std::vector<TreeCertificate>& out) const {
    if (d == 1) {
      out.push_back(build(a, b));
      return;
    }
    int c = arg_q_[at_q(d, a, b)];
    pieces_bounded(a, c, d - 1, out);
    out.push_back(build(c + 1, b));
  }

  void pieces_unbounded(int a, int b, std::vector<TreeCertificate>& out) const {
    int c = arg_u_[at(a, b)];
    if (from_u_[at(a, c)])
      pieces_unbounded(a, c, out);
    else
      out.push_back(build(a, c));
    out.push_back(build(c + 1, b));
  }

  TreeCertificate build(int a, int b) const {
    const Cell& c = cell_[at(a, b)];
    if (c.choice == Choice::terminal) return TreeCertificate::terminal(sgn_[c.pos], pos_[c.pos]);
    std::vector<TreeCertificate> children;
    if (c.choice == Choice::bounded)
      pieces_bounded(a, b, c.d, children);
    else
      pieces_unbounded(a, b, children);
    return TreeCertificate::weighted(1, c.j, NodeTag::regular, Interval{pos_[a], pos_[b]},
                                     std::move(children));
  }

  const ParameterSchedule& sched_;
  MtOptions opts_;
  std::vector<Index> pos_;
  std::vector<Rational> val_;
  std::vector<int> sgn_;
  std::vector<Rational> prefix_;
  int s_ = 0;
  std::vector<Weight> weights_;
  int dmax_ = 1;
  int effective_j_ = 0;
  std::vector<Rational> N_;
  std::vector<Cell> cell_;
  std::vector<int> arg_q_;
  std::vector<int> arg_u_;
  std::vector<std::uint8_t> from_u_;
};

}  // namespace

NormResult mt_norm_exact(const FinVector& x, const ParameterSchedule& sched, const MtOptions& opts) {
  if (x.is_zero()) throw InvalidArgument("mt_norm_exact: zero vector");
  return Solver(x, sched, opts).run();
}

Rational mt_norm_oracle(const FinVector& x, const ParameterSchedule& sched, int depth_cap,
                        std::size_t budget) {
  if (x.is_zero()) throw InvalidArgument("mt_norm_oracle: zero vector");
  if (depth_cap < 0) throw InvalidArgument("mt_norm_oracle: negative depth cap");
  std::vector<Rational> coord;
  for (const auto& [i, v] : x) coord.push_back(abs(v));
  const int s = static_cast<int>(coord.size());

  // best[(first, last)]: largest value on x of a functional whose support
  // inside supp(x) starts at position `first` and ends at `last`. Leaf signs
  // are free, so the attainable values are symmetric and sums and positive
  // scalings are monotone: the largest value per key is all that is needed.
  using Table = std::map<std::pair<int, int>, Rational>;
  auto raise = [](Table& t, std::pair<int, int> key, const Rational& v) {
    auto [it, inserted] = t.emplace(key, v);
    if (!inserted && v > it->second) it->second = v;
  };
  Table level;
  for (int p = 0; p < s; ++p) level[{p, p}] = coord[p];

  std::vector<std::pair<Rational, long>> weights;
  for (int j = 1; sched.m(j) < s; ++j) weights.emplace_back(Rational(1) / Rational(sched.m(j)), sched.arity(j, s));
  long max_arity = 0;
  for (const auto& w : weights) max_arity = std::max(max_arity, w.second);

  std::size_t work = 0;
  for (int depth = 1; depth <= depth_cap && !weights.empty(); ++depth) {
    // chains[d]: sums over d-element block sequences drawn from `level`, gaps allowed.
    std::vector<Table> chains(static_cast<std::size_t>(max_arity + 1));
    chains[1] = level;
    for (long d = 2; d <= max_arity; ++d) {
      for (const auto& [key, sum] : chains[d - 1])
        for (const auto& [next, v] : level) {
          if (next.first <= key.second) continue;
          if (++work > budget) throw CapacityError("mt_norm_oracle: work budget exceeded");
          raise(chains[d], {key.first, next.second}, sum + v);
        }
    }
    Table next = level;
    for (const auto& [w, n] : weights)
      for (long d = 1; d <= n; ++d)
        for (const auto& [key, sum] : chains[d]) raise(next, key, sum * w);
    if (next == level) break;
    level = std::move(next);
  }
  Rational best = 0;
  for (const auto& [key, v] : level) best = std::max(best, v);
  return best;
}

}  // namespace gms
