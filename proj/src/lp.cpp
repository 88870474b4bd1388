#include "plhvcsp/lp.hpp"

#include <algorithm>
#include <cmath>

#include "plhvcsp/errors.hpp"

namespace plhvcsp {

int LinearProgram::add_variable(std::string name, std::optional<Rational> lo,
                                std::optional<Rational> hi, Rational cost) {
  names.push_back(std::move(name));
  lower.push_back(std::move(lo));
  upper.push_back(std::move(hi));
  objective.push_back(std::move(cost));
  return static_cast<int>(names.size()) - 1;
}

void LinearProgram::add_constraint(std::vector<LinearTerm> terms, Sense sense, Rational rhs) {
  constraints.push_back(Constraint{std::move(terms), sense, std::move(rhs)});
}

namespace {

using Column = std::vector<std::pair<int, Rational>>;

// Relative noise level of double-precision reduced costs.
constexpr double kPricingTolerance = 1e-9;
constexpr mp_bitcnt_t kPricingBits = 320;

enum class VarKind { Shift, Reflect, Split };

struct VarMap {
  VarKind kind;
  int col;       // x' (or x+ for Split)
  int neg = -1;  // x- for Split
};

// min c.x, A x = b, x >= 0, b >= 0, with an identity starting basis.
class Simplex {
 public:
  Simplex(int rows, std::vector<Column> cols, std::vector<Rational> b,
          std::vector<int> initial_basis, const LPOptions& options)
      : m_(rows),
        cols_(std::move(cols)),
        basis_(std::move(initial_basis)),
        xb_(std::move(b)),
        options_(options) {
    const std::size_t mm = static_cast<std::size_t>(m_) * static_cast<std::size_t>(m_);
    binv_.assign(mm, Rational(0));
    for (int i = 0; i < m_; ++i) binv_[idx(i, i)] = 1;
    is_basic_.assign(cols_.size(), 0);
    for (int c : basis_) is_basic_[static_cast<std::size_t>(c)] = 1;
    eligible_.assign(cols_.size(), 1);
    col_start_.push_back(0);
    for (const auto& col : cols_) {
      for (const auto& [row, val] : col) {
        col_row_.push_back(row);
        col_val_.push_back(val.get_d());
        col_val_f_.emplace_back(val, kPricingBits);
      }
      col_start_.push_back(col_row_.size());
    }
  }

  void forbid(int col) { eligible_[static_cast<std::size_t>(col)] = 0; }

  // false when unbounded.
  bool optimize(const std::vector<Rational>& cost) {
    const bool always_bland = options_.rule == PivotRule::Bland;
    bool bland = always_bland;
    int degenerate_run = 0;
    bool lex = false;
    const std::size_t ncols = cols_.size();
    std::vector<Rational> y(static_cast<std::size_t>(m_));
    std::vector<double> yd(static_cast<std::size_t>(m_), 0.0);
    std::vector<double> cost_d(ncols);
    for (std::size_t j = 0; j < ncols; ++j) cost_d[j] = cost[j].get_d();
    std::vector<Rational> alpha(static_cast<std::size_t>(m_));
    Rational d, tmp, best;
    for (int r = 0; r < m_; ++r) {
      const Rational& cb = cost[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])];
      if (sgn(cb) == 0) continue;
      for (int i = 0; i < m_; ++i) {
        const Rational& e = binv_[idx(r, i)];
        if (sgn(e) == 0) continue;
        mpq_mul(tmp.get_mpq_t(), cb.get_mpq_t(), e.get_mpq_t());
        y[static_cast<std::size_t>(i)] += tmp;
      }
    }
    std::vector<mpf_class> yf(static_cast<std::size_t>(m_), mpf_class(0, kPricingBits));
    std::vector<mpf_class> cost_f(ncols, mpf_class(0, kPricingBits));
    for (std::size_t j = 0; j < ncols; ++j) mpf_set_q(cost_f[j].get_mpf_t(), cost[j].get_mpq_t());
    mpf_class df(0, kPricingBits), tf(0, kPricingBits);
    for (int i = 0; i < m_; ++i) {
      yd[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)].get_d();
      mpf_set_q(yf[static_cast<std::size_t>(i)].get_mpf_t(), y[static_cast<std::size_t>(i)].get_mpq_t());
    }

    auto reduced_cost = [&](std::size_t j) {
      d = cost[j];
      for (const auto& [row, val] : cols_[j]) {
        const Rational& yr = y[static_cast<std::size_t>(row)];
        if (sgn(yr) == 0) continue;
        if (val == 1) {
          d -= yr;
        } else {
          mpq_mul(tmp.get_mpq_t(), yr.get_mpq_t(), val.get_mpq_t());
          d -= tmp;
        }
      }
    };
    // Returns the reduced cost and, through scale, the magnitude of the
    // terms it cancels.
    auto reduced_cost_d = [&](std::size_t j, double& scale) {
      double v = cost_d[j];
      scale = std::abs(v);
      for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) {
        const double t = yd[static_cast<std::size_t>(col_row_[k])] * col_val_[k];
        v -= t;
        scale += std::abs(t);
      }
      return v;
    };
    auto reduced_cost_f = [&](std::size_t j) {
      df = cost_f[j];
      for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) {
        const mpf_class& yr = yf[static_cast<std::size_t>(col_row_[k])];
        if (col_val_[k] == 1.0) {
          df -= yr;
        } else if (col_val_[k] == -1.0) {
          df += yr;
        } else {
          mpf_mul(tf.get_mpf_t(), yr.get_mpf_t(), col_val_f_[k].get_mpf_t());
          df -= tf;
        }
      }
    };
    auto verified = [&](int j) {
      if (j < 0) return false;
      reduced_cost(static_cast<std::size_t>(j));
      if (sgn(d) >= 0) return false;
      best = d;
      return true;
    };
    // Exact scan: the first (Bland) or most negative reduced cost.
    auto exact_scan = [&](bool first) {
      int entering = -1;
      for (std::size_t j = 0; j < ncols; ++j) {
        if (is_basic_[j] || !eligible_[j]) continue;
        reduced_cost(j);
        if (sgn(d) >= 0) continue;
        if (entering < 0 || d < best) {
          entering = static_cast<int>(j);
          best = d;
          if (first) break;
        }
      }
      return entering;
    };

    for (;;) {
      int entering = -1;
      if (bland) {
        entering = exact_scan(true);
      } else {
        // Pricing in double precision, then in extended precision when
        // cancellation hides the candidates; exact arithmetic confirms the
        // choice and an exact scan settles optimality.
        double best_d = 0;
        for (std::size_t j = 0; j < ncols; ++j) {
          if (is_basic_[j] || !eligible_[j]) continue;
          double scale;
          const double v = reduced_cost_d(j, scale);
          if (v < -kPricingTolerance * scale && v < best_d) {
            best_d = v;
            entering = static_cast<int>(j);
          }
        }
        if (!verified(entering)) {
          entering = -1;
          mpf_class best_f(0, kPricingBits);
          for (std::size_t j = 0; j < ncols; ++j) {
            if (is_basic_[j] || !eligible_[j]) continue;
            reduced_cost_f(j);
            if (df < best_f) {
              best_f = df;
              entering = static_cast<int>(j);
            }
          }
          if (!verified(entering)) entering = exact_scan(false);
        }
      }
      if (entering < 0) return true;

      column_in_basis(entering, alpha);
      int leave = -1;
      Rational theta;
      for (int r = 0; r < m_; ++r) {
        const Rational& a = alpha[static_cast<std::size_t>(r)];
        if (sgn(a) <= 0) continue;
        Rational ratio = xb_[static_cast<std::size_t>(r)] / a;
        if (leave < 0 || ratio < theta ||
            (ratio == theta && (lex ? lex_less(r, leave, alpha)
                                     : basis_[static_cast<std::size_t>(r)] <
                                           basis_[static_cast<std::size_t>(leave)]))) {
          leave = r;
          theta = std::move(ratio);
        }
      }
      if (leave < 0) return false;
      // A stall at a vertex switches the ratio test to the lexicographic rule,
      // and a much longer one to Bland's rule, in case drive_out left a basis
      // whose rows are not lexicographically positive.
      if (sgn(theta) == 0) {
        ++degenerate_run;
        if (degenerate_run > options_.lexicographic_after) lex = true;
        if (degenerate_run > options_.degenerate_run_limit) bland = true;
      } else {
        degenerate_run = 0;
        lex = false;
        bland = always_bland;
      }
      pivot(leave, entering, alpha);
      // y += d_q * (row `leave` of the new inverse)
      for (int c = 0; c < m_; ++c) {
        const Rational& e = binv_[idx(leave, c)];
        if (sgn(e) == 0) continue;
        mpq_mul(tmp.get_mpq_t(), best.get_mpq_t(), e.get_mpq_t());
        y[static_cast<std::size_t>(c)] += tmp;
        yd[static_cast<std::size_t>(c)] = y[static_cast<std::size_t>(c)].get_d();
        mpf_set_q(yf[static_cast<std::size_t>(c)].get_mpf_t(), y[static_cast<std::size_t>(c)].get_mpq_t());
      }
    }
  }

  // Pivots basic artificial columns (index >= first_artificial) out where
  // possible; the rest sit on redundant rows.
  void drive_out(int first_artificial) {
    std::vector<Rational> alpha(static_cast<std::size_t>(m_));
    Rational tmp;
    for (int r = 0; r < m_; ++r) {
      if (basis_[static_cast<std::size_t>(r)] < first_artificial) continue;
      for (int j = 0; j < first_artificial; ++j) {
        if (is_basic_[static_cast<std::size_t>(j)]) continue;
        Rational v = 0;
        for (const auto& [row, val] : cols_[static_cast<std::size_t>(j)]) {
          mpq_mul(tmp.get_mpq_t(), binv_[idx(r, row)].get_mpq_t(), val.get_mpq_t());
          v += tmp;
        }
        if (sgn(v) == 0) continue;
        column_in_basis(j, alpha);
        pivot(r, j, alpha);
        break;
      }
    }
  }

  std::vector<Rational> values() const {
    std::vector<Rational> x(cols_.size(), Rational(0));
    for (int r = 0; r < m_; ++r)
      x[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] =
          xb_[static_cast<std::size_t>(r)];
    return x;
  }

 private:
  std::size_t idx(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(m_) +
           static_cast<std::size_t>(c);
  }

  // Ties in the ratio test go to the lexicographically smaller row of
  // B^-1 / alpha, which keeps Dantzig pricing from cycling.
  bool lex_less(int r, int l, const std::vector<Rational>& alpha) const {
    mpq_srcptr ar = alpha[static_cast<std::size_t>(r)].get_mpq_t();
    mpq_srcptr al = alpha[static_cast<std::size_t>(l)].get_mpq_t();
    Rational u, v;
    for (int c = 0; c < m_; ++c) {
      const Rational& er = binv_[idx(r, c)];
      const Rational& el = binv_[idx(l, c)];
      if (sgn(er) == 0 && sgn(el) == 0) continue;
      mpq_mul(u.get_mpq_t(), er.get_mpq_t(), al);
      mpq_mul(v.get_mpq_t(), el.get_mpq_t(), ar);
      const int c2 = cmp(u, v);
      if (c2 != 0) return c2 < 0;
    }
    return basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(l)];
  }

  void column_in_basis(int j, std::vector<Rational>& alpha) const {
    Rational tmp;
    for (auto& a : alpha) a = 0;
    for (const auto& [row, val] : cols_[static_cast<std::size_t>(j)])
      for (int r = 0; r < m_; ++r) {
        const Rational& e = binv_[idx(r, row)];
        if (sgn(e) == 0) continue;
        mpq_mul(tmp.get_mpq_t(), e.get_mpq_t(), val.get_mpq_t());
        alpha[static_cast<std::size_t>(r)] += tmp;
      }
  }

  void pivot(int r, int entering, const std::vector<Rational>& alpha) {
    const Rational piv = alpha[static_cast<std::size_t>(r)];
    std::vector<int> nz;
    for (int c = 0; c < m_; ++c) {
      Rational& e = binv_[idx(r, c)];
      if (sgn(e) == 0) continue;
      e /= piv;
      nz.push_back(c);
    }
    xb_[static_cast<std::size_t>(r)] /= piv;
    Rational tmp;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      const Rational& a = alpha[static_cast<std::size_t>(i)];
      if (sgn(a) == 0) continue;
      for (int c : nz) {
        mpq_mul(tmp.get_mpq_t(), a.get_mpq_t(), binv_[idx(r, c)].get_mpq_t());
        binv_[idx(i, c)] -= tmp;
      }
      mpq_mul(tmp.get_mpq_t(), a.get_mpq_t(), xb_[static_cast<std::size_t>(r)].get_mpq_t());
      xb_[static_cast<std::size_t>(i)] -= tmp;
    }
    is_basic_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] = 0;
    basis_[static_cast<std::size_t>(r)] = entering;
    is_basic_[static_cast<std::size_t>(entering)] = 1;
  }

  int m_;
  std::vector<Column> cols_;
  std::vector<int> basis_;
  std::vector<Rational> xb_;
  std::vector<Rational> binv_;
  std::vector<char> is_basic_;
  std::vector<char> eligible_;
  LPOptions options_;
  // Floating-point copy of the columns in compressed form, for pricing.
  std::vector<std::size_t> col_start_;
  std::vector<int> col_row_;
  std::vector<double> col_val_;
  std::vector<mpf_class> col_val_f_;
};

struct Row {
  std::vector<std::pair<int, Rational>> entries;  // column, coefficient
  Sense sense;
  Rational rhs;
};

}  // namespace

LPResult solve_lp(const LinearProgram& p, const LPOptions& options) {
  const std::size_t n = p.variable_count();
  if (p.lower.size() != n || p.upper.size() != n || p.objective.size() != n)
    throw Error("malformed linear program");

  std::vector<VarMap> maps(n);
  int cols = 0;
  std::vector<Row> rows;
  for (std::size_t v = 0; v < n; ++v) {
    if (p.lower[v]) {
      maps[v] = VarMap{VarKind::Shift, cols++};
      if (p.upper[v])
        rows.push_back(Row{{{maps[v].col, Rational(1)}}, Sense::LessEq,
                           Rational(*p.upper[v] - *p.lower[v])});
    } else if (p.upper[v]) {
      maps[v] = VarMap{VarKind::Reflect, cols++};
    } else {
      maps[v] = VarMap{VarKind::Split, cols, cols + 1};
      cols += 2;
    }
  }
  const int structural = cols;

  auto substitute = [&](const std::vector<LinearTerm>& terms, Rational& rhs) {
    std::vector<std::pair<int, Rational>> out;
    for (const auto& t : terms) {
      if (t.var < 0 || static_cast<std::size_t>(t.var) >= n)
        throw Error("constraint references unknown variable");
      const auto v = static_cast<std::size_t>(t.var);
      switch (maps[v].kind) {
        case VarKind::Shift:
          out.emplace_back(maps[v].col, t.coeff);
          rhs -= t.coeff * *p.lower[v];
          break;
        case VarKind::Reflect:
          out.emplace_back(maps[v].col, -t.coeff);
          rhs -= t.coeff * *p.upper[v];
          break;
        case VarKind::Split:
          out.emplace_back(maps[v].col, t.coeff);
          out.emplace_back(maps[v].neg, -t.coeff);
          break;
      }
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<int, Rational>> merged;
    for (auto& e : out) {
      if (!merged.empty() && merged.back().first == e.first)
        merged.back().second += e.second;
      else
        merged.push_back(std::move(e));
    }
    std::erase_if(merged, [](const auto& e) { return sgn(e.second) == 0; });
    return merged;
  };

  for (const auto& c : p.constraints) {
    Rational rhs = c.rhs;
    auto entries = substitute(c.terms, rhs);
    rows.push_back(Row{std::move(entries), c.sense, std::move(rhs)});
  }

  const int m = static_cast<int>(rows.size());
  std::vector<Column> columns(static_cast<std::size_t>(structural));
  std::vector<Rational> b(static_cast<std::size_t>(m));
  std::vector<int> basis(static_cast<std::size_t>(m), -1);
  std::vector<int> pending;  // rows needing an artificial
  for (int r = 0; r < m; ++r) {
    Row& row = rows[static_cast<std::size_t>(r)];
    const bool negate = sgn(row.rhs) < 0;
    const Rational sign = negate ? -1 : 1;
    for (auto& [col, val] : row.entries)
      columns[static_cast<std::size_t>(col)].emplace_back(r, Rational(sign * val));
    b[static_cast<std::size_t>(r)] = sign * row.rhs;
    if (row.sense != Sense::Equal) {
      const Rational slack = (row.sense == Sense::LessEq ? 1 : -1) * sign;
      columns.push_back(Column{{r, slack}});
      if (slack > 0) basis[static_cast<std::size_t>(r)] = static_cast<int>(columns.size()) - 1;
    }
    if (basis[static_cast<std::size_t>(r)] < 0) pending.push_back(r);
  }
  const int first_artificial = static_cast<int>(columns.size());
  for (int r : pending) {
    columns.push_back(Column{{r, Rational(1)}});
    basis[static_cast<std::size_t>(r)] = static_cast<int>(columns.size()) - 1;
  }

  Simplex simplex(m, std::move(columns), std::move(b), std::move(basis), options);
  const std::size_t total = static_cast<std::size_t>(first_artificial) + pending.size();

  if (!pending.empty()) {
    std::vector<Rational> phase1(total, Rational(0));
    for (std::size_t j = static_cast<std::size_t>(first_artificial); j < total; ++j) phase1[j] = 1;
    simplex.optimize(phase1);
    const auto x = simplex.values();
    for (std::size_t j = static_cast<std::size_t>(first_artificial); j < total; ++j)
      if (sgn(x[j]) != 0) return LPResult{LPStatus::Infeasible, 0, {}};
    simplex.drive_out(first_artificial);
    for (std::size_t j = static_cast<std::size_t>(first_artificial); j < total; ++j)
      simplex.forbid(static_cast<int>(j));
  }

  std::vector<Rational> cost(total, Rational(0));
  for (std::size_t v = 0; v < n; ++v) {
    const Rational& c = p.objective[v];
    switch (maps[v].kind) {
      case VarKind::Shift:
        cost[static_cast<std::size_t>(maps[v].col)] = c;
        break;
      case VarKind::Reflect:
        cost[static_cast<std::size_t>(maps[v].col)] = -c;
        break;
      case VarKind::Split:
        cost[static_cast<std::size_t>(maps[v].col)] = c;
        cost[static_cast<std::size_t>(maps[v].neg)] = -c;
        break;
    }
  }
  if (!simplex.optimize(cost)) return LPResult{LPStatus::Unbounded, 0, {}};

  const auto x = simplex.values();
  LPResult result;
  result.status = LPStatus::Optimal;
  result.point.resize(n);
  result.value = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const auto& mp = maps[v];
    const Rational& xc = x[static_cast<std::size_t>(mp.col)];
    switch (mp.kind) {
      case VarKind::Shift:
        result.point[v] = *p.lower[v] + xc;
        break;
      case VarKind::Reflect:
        result.point[v] = *p.upper[v] - xc;
        break;
      case VarKind::Split:
        result.point[v] = xc - x[static_cast<std::size_t>(mp.neg)];
        break;
    }
    result.value += p.objective[v] * result.point[v];
  }
  return result;
}

namespace {

std::string linear_text(const LinearProgram& p, const std::vector<LinearTerm>& terms) {
  if (terms.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) out += " + ";
    out += to_string(terms[i].coeff) + "*" + p.names[static_cast<std::size_t>(terms[i].var)];
  }
  return out;
}

}  // namespace

std::string dump_lp(const LinearProgram& p) {
  std::vector<LinearTerm> obj;
  for (std::size_t v = 0; v < p.variable_count(); ++v)
    if (sgn(p.objective[v]) != 0) obj.push_back(LinearTerm{static_cast<int>(v), p.objective[v]});
  std::string out = "min: " + linear_text(p, obj) + "\n";
  for (const auto& c : p.constraints) {
    const char* rel = c.sense == Sense::LessEq ? " <= " : c.sense == Sense::Equal ? " = " : " >= ";
    out += linear_text(p, c.terms) + rel + to_string(c.rhs) + "\n";
  }
  for (std::size_t v = 0; v < p.variable_count(); ++v) {
    if (p.lower[v]) out += p.names[v] + " >= " + to_string(*p.lower[v]) + "\n";
    if (p.upper[v]) out += p.names[v] + " <= " + to_string(*p.upper[v]) + "\n";
  }
  return out;
}

bool satisfies(const LinearProgram& p, const std::vector<Rational>& point) {
  if (point.size() != p.variable_count()) return false;
  for (std::size_t v = 0; v < point.size(); ++v) {
    if (p.lower[v] && point[v] < *p.lower[v]) return false;
    if (p.upper[v] && point[v] > *p.upper[v]) return false;
  }
  for (const auto& c : p.constraints) {
    Rational lhs = 0;
    for (const auto& t : c.terms) lhs += t.coeff * point[static_cast<std::size_t>(t.var)];
    const bool ok = c.sense == Sense::LessEq  ? lhs <= c.rhs
                    : c.sense == Sense::Equal ? lhs == c.rhs
                                              : lhs >= c.rhs;
    if (!ok) return false;
  }
  return true;
}

StrictResult strict_feasibility(int variable_count, const std::vector<MixedConstraint>& rows,
                                const LPOptions& options) {
  LinearProgram lp;
  for (int i = 0; i < variable_count; ++i) lp.add_free_variable("x" + std::to_string(i));
  const int delta = lp.add_variable("delta", Rational(0), Rational(1), Rational(-1));
  for (const auto& row : rows) {
    std::vector<LinearTerm> terms = row.terms;
    switch (row.rel) {
      case MixedRel::Less:
        terms.push_back(LinearTerm{delta, 1});
        lp.add_constraint(std::move(terms), Sense::LessEq, row.rhs);
        break;
      case MixedRel::LessEq:
        lp.add_constraint(std::move(terms), Sense::LessEq, row.rhs);
        break;
      case MixedRel::Equal:
        lp.add_constraint(std::move(terms), Sense::Equal, row.rhs);
        break;
    }
  }
  const LPResult r = solve_lp(lp, options);
  StrictResult out;
  if (r.status != LPStatus::Optimal) return out;
  out.slack = r.point[static_cast<std::size_t>(delta)];
  out.feasible = sgn(out.slack) > 0;
  if (out.feasible) out.point.assign(r.point.begin(), r.point.begin() + variable_count);
  return out;
}

}  // namespace plhvcsp
