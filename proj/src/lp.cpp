#include "wpvol/lp.hpp"

#include "wpvol/errors.hpp"

namespace wpvol {

void LinearProgram::add(std::vector<Rational> coeffs, Relation rel, Rational rhs) {
  if (static_cast<int>(coeffs.size()) != num_vars) throw DimensionMismatch("LP row has wrong length");
  rows.push_back({std::move(coeffs), rel, std::move(rhs)});
}

namespace {

using Q = mpq_class;

class Tableau {
 public:
  Tableau(std::vector<std::vector<Q>> rows, std::vector<int> basis, int cols)
      : t_(std::move(rows)), basis_(std::move(basis)), cols_(cols) {}

  enum class Outcome { Optimal, Unbounded };

  // maximize cost . x over the current basis, entering only where allowed[j]
  Outcome run(const std::vector<Q>& cost, const std::vector<bool>& allowed) {
    std::vector<Q> red(static_cast<std::size_t>(cols_) + 1);
    for (int j = 0; j <= cols_; ++j) {
      Q r = j < cols_ ? Q(-cost[static_cast<std::size_t>(j)]) : Q(0);
      for (std::size_t i = 0; i < t_.size(); ++i) {
        const Q& cb = cost[static_cast<std::size_t>(basis_[i])];
        if (sgn(cb) != 0) r += cb * t_[i][static_cast<std::size_t>(j)];
      }
      red[static_cast<std::size_t>(j)] = r;
    }
    for (;;) {
      int enter = -1;
      for (int j = 0; j < cols_; ++j) {
        if (allowed[static_cast<std::size_t>(j)] && sgn(red[static_cast<std::size_t>(j)]) < 0) {
          enter = j;
          break;
        }
      }
      if (enter < 0) {
        value_ = red[static_cast<std::size_t>(cols_)];
        return Outcome::Optimal;
      }
      int leave = -1;
      Q best, ratio;
      for (std::size_t i = 0; i < t_.size(); ++i) {
        const Q& a = t_[i][static_cast<std::size_t>(enter)];
        if (sgn(a) <= 0) continue;
        ratio = t_[i][static_cast<std::size_t>(cols_)] / a;
        if (leave < 0 || ratio < best || (ratio == best && basis_[i] < basis_[static_cast<std::size_t>(leave)])) {
          leave = static_cast<int>(i);
          best = ratio;
        }
      }
      if (leave < 0) return Outcome::Unbounded;
      pivot(static_cast<std::size_t>(leave), enter);
      const Q f = red[static_cast<std::size_t>(enter)];
      const auto& pr = t_[static_cast<std::size_t>(leave)];
      for (int j = 0; j <= cols_; ++j) {
        if (sgn(pr[static_cast<std::size_t>(j)]) != 0) red[static_cast<std::size_t>(j)] -= f * pr[static_cast<std::size_t>(j)];
      }
    }
  }

  void pivot(std::size_t row, int col) {
    auto& pr = t_[row];
    const Q inv = 1 / pr[static_cast<std::size_t>(col)];
    nz_.clear();
    for (std::size_t j = 0; j < pr.size(); ++j) {
      if (sgn(pr[j]) != 0) {
        pr[j] *= inv;
        nz_.push_back(j);
      }
    }
    Q tmp;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (i == row) continue;
      const Q f = t_[i][static_cast<std::size_t>(col)];
      if (sgn(f) == 0) continue;
      for (std::size_t j : nz_) {
        mpq_mul(tmp.get_mpq_t(), f.get_mpq_t(), pr[j].get_mpq_t());
        mpq_sub(t_[i][j].get_mpq_t(), t_[i][j].get_mpq_t(), tmp.get_mpq_t());
      }
    }
    basis_[row] = col;
  }

  void drop_row(std::size_t row) {
    t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(row));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(row));
  }

  std::vector<std::vector<Q>>& rows() { return t_; }
  std::vector<int>& basis() { return basis_; }
  const Q& value() const { return value_; }

 private:
  std::vector<std::vector<Q>> t_;
  std::vector<int> basis_;
  int cols_;
  Q value_;
  std::vector<std::size_t> nz_;
};

}  // namespace

LpResult maximize(const LinearProgram& lp) {
  // normalize every row to coeffs . x (<= | = | >=) rhs with rhs >= 0
  struct Norm {
    std::vector<Rational> a;
    Relation rel;
    Rational b;
  };
  std::vector<Norm> norm;
  for (const auto& r : lp.rows) {
    Norm n{r.coeffs, r.rel, r.rhs};
    if (n.b.sign() < 0) {
      for (auto& v : n.a) v = -v;
      n.b = -n.b;
      if (n.rel == Relation::LessEq) n.rel = Relation::GreaterEq;
      else if (n.rel == Relation::GreaterEq) n.rel = Relation::LessEq;
    }
    norm.push_back(std::move(n));
  }
  const int nv = lp.num_vars;
  int slack = 0, art = 0;
  for (const auto& r : norm) {
    if (r.rel != Relation::Equal) ++slack;
    if (r.rel != Relation::LessEq) ++art;
  }
  const int cols = nv + slack + art;
  std::vector<std::vector<Q>> rows;
  std::vector<int> basis;
  std::vector<bool> is_art(static_cast<std::size_t>(cols), false);
  int next_slack = nv, next_art = nv + slack;
  for (const auto& r : norm) {
    std::vector<Q> row(static_cast<std::size_t>(cols) + 1);
    for (int j = 0; j < nv; ++j) row[static_cast<std::size_t>(j)] = r.a[static_cast<std::size_t>(j)].raw();
    row[static_cast<std::size_t>(cols)] = r.b.raw();
    if (r.rel == Relation::LessEq) {
      row[static_cast<std::size_t>(next_slack)] = 1;
      basis.push_back(next_slack++);
    } else {
      if (r.rel == Relation::GreaterEq) row[static_cast<std::size_t>(next_slack++)] = -1;
      row[static_cast<std::size_t>(next_art)] = 1;
      is_art[static_cast<std::size_t>(next_art)] = true;
      basis.push_back(next_art++);
    }
    rows.push_back(std::move(row));
  }
  Tableau tab(std::move(rows), std::move(basis), cols);
  std::vector<bool> all(static_cast<std::size_t>(cols), true);

  LpResult result;
  if (art > 0) {
    std::vector<Q> cost(static_cast<std::size_t>(cols));
    for (int j = 0; j < cols; ++j) {
      if (is_art[static_cast<std::size_t>(j)]) cost[static_cast<std::size_t>(j)] = -1;
    }
    tab.run(cost, all);
    if (sgn(tab.value()) < 0) {
      result.status = LpResult::Status::Infeasible;
      return result;
    }
    // drive zero-level artificials out of the basis
    for (std::size_t i = 0; i < tab.basis().size();) {
      if (!is_art[static_cast<std::size_t>(tab.basis()[i])]) {
        ++i;
        continue;
      }
      int col = -1;
      for (int j = 0; j < cols; ++j) {
        if (!is_art[static_cast<std::size_t>(j)] && sgn(tab.rows()[i][static_cast<std::size_t>(j)]) != 0) {
          col = j;
          break;
        }
      }
      if (col < 0) {
        tab.drop_row(i);  // redundant equality
      } else {
        tab.pivot(i, col);
        ++i;
      }
    }
  }
  std::vector<Q> cost(static_cast<std::size_t>(cols));
  for (int j = 0; j < nv; ++j) cost[static_cast<std::size_t>(j)] = lp.objective[static_cast<std::size_t>(j)].raw();
  std::vector<bool> allowed(static_cast<std::size_t>(cols));
  for (int j = 0; j < cols; ++j) allowed[static_cast<std::size_t>(j)] = !is_art[static_cast<std::size_t>(j)];
  if (tab.run(cost, allowed) == Tableau::Outcome::Unbounded) {
    result.status = LpResult::Status::Unbounded;
    return result;
  }
  result.status = LpResult::Status::Optimal;
  result.value = Rational(tab.value());
  result.x.assign(static_cast<std::size_t>(nv), Rational(0));
  for (std::size_t i = 0; i < tab.basis().size(); ++i) {
    const int b = tab.basis()[i];
    if (b < nv) result.x[static_cast<std::size_t>(b)] = Rational(tab.rows()[i][static_cast<std::size_t>(cols)]);
  }
  return result;
}

}  // namespace wpvol
