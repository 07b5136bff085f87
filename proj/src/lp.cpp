#include "sbic/lp.hpp"

#include <optional>

#include "sbic/errors.hpp"

namespace sbic {

void LinearProgram::add_row(std::vector<Rational> coefficients, Sense sense, Rational b) {
  if (coefficients.size() != variables) throw InputError("constraint row has the wrong length");
  rows.push_back(std::move(coefficients));
  senses.push_back(sense);
  rhs.push_back(std::move(b));
}

namespace {

// Row-major tableau; the last column is the right-hand side and the last row
// holds the reduced costs of the current objective (to be maximised).
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : cols_(cols), t_(rows + 1, std::vector<Rational>(cols + 1)) {}

  Rational& at(std::size_t r, std::size_t c) { return t_[r][c]; }
  Rational& rhs(std::size_t r) { return t_[r][cols_]; }
  std::size_t rows() const { return t_.size() - 1; }
  std::size_t cols() const { return cols_; }
  std::vector<Rational>& cost() { return t_.back(); }
  std::vector<std::size_t> basis;

  void pivot(std::size_t r, std::size_t c) {
    const Rational p = t_[r][c];
    for (auto& v : t_[r]) v /= p;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (i == r || sgn(t_[i][c]) == 0) continue;
      const Rational f = t_[i][c];
      for (std::size_t j = 0; j <= cols_; ++j)
        if (sgn(t_[r][j]) != 0) t_[i][j] -= f * t_[r][j];
    }
    basis[r] = c;
  }

  // Sets the cost row to obj expressed in the current basis.
  void load_objective(const std::vector<Rational>& obj) {
    auto& z = cost();
    for (std::size_t j = 0; j < cols_; ++j) z[j] = j < obj.size() ? obj[j] : Rational(0);
    z[cols_] = 0;
    for (std::size_t i = 0; i < rows(); ++i) {
      const Rational cb = basis[i] < obj.size() ? obj[basis[i]] : Rational(0);
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) z[j] -= cb * t_[i][j];
    }
  }

  // Bland's rule on columns [0, limit). Returns false when unbounded.
  bool optimise(std::size_t limit) {
    for (;;) {
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < limit; ++j)
        if (sgn(cost()[j]) > 0) {
          enter = j;
          break;
        }
      if (!enter) return true;
      std::optional<std::size_t> leave;
      Rational best;
      for (std::size_t i = 0; i < rows(); ++i) {
        if (sgn(t_[i][*enter]) <= 0) continue;
        Rational ratio = t_[i][cols_] / t_[i][*enter];
        if (!leave || ratio < best || (ratio == best && basis[i] < basis[*leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (!leave) return false;
      pivot(*leave, *enter);
    }
  }

  void drop_row(std::size_t r) {
    t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(r));
    basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(r));
  }

 private:
  std::size_t cols_;
  std::vector<std::vector<Rational>> t_;
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp) {
  const std::size_t m = lp.rows.size();
  const std::size_t n = lp.variables;
  if (lp.objective.size() != n) throw InputError("objective has the wrong length");

  // Column layout: structural | slack or surplus per inequality | artificial per row that needs one.
  std::vector<Rational> b = lp.rhs;
  std::vector<std::vector<Rational>> A = lp.rows;
  std::vector<Sense> sense = lp.senses;
  for (std::size_t i = 0; i < m; ++i)
    if (sgn(b[i]) < 0) {
      b[i] = -b[i];
      for (auto& v : A[i]) v = -v;
      if (sense[i] != Sense::Eq) sense[i] = sense[i] == Sense::Le ? Sense::Ge : Sense::Le;
    }
  std::size_t slacks = 0, artificials = 0;
  for (auto s : sense) {
    if (s != Sense::Eq) ++slacks;
    if (s != Sense::Le) ++artificials;
  }
  const std::size_t first_art = n + slacks;
  Tableau tab(m, n + slacks + artificials);
  tab.basis.assign(m, 0);
  std::size_t slack = n, art = first_art;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) tab.at(i, j) = A[i][j];
    tab.rhs(i) = b[i];
    if (sense[i] == Sense::Le) {
      tab.at(i, slack) = 1;
      tab.basis[i] = slack++;
    } else {
      if (sense[i] == Sense::Ge) tab.at(i, slack++) = -1;
      tab.at(i, art) = 1;
      tab.basis[i] = art++;
    }
  }

  LpResult result;
  if (artificials > 0) {
    std::vector<Rational> phase1(tab.cols());
    for (std::size_t j = first_art; j < tab.cols(); ++j) phase1[j] = -1;
    tab.load_objective(phase1);
    tab.optimise(tab.cols());
    if (sgn(tab.cost()[tab.cols()]) != 0) return result;  // residual artificial mass
    for (std::size_t i = tab.rows(); i-- > 0;) {
      if (tab.basis[i] < first_art) continue;
      std::optional<std::size_t> col;
      for (std::size_t j = 0; j < first_art; ++j)
        if (sgn(tab.at(i, j)) != 0) {
          col = j;
          break;
        }
      if (col)
        tab.pivot(i, *col);
      else
        tab.drop_row(i);
    }
  }

  tab.load_objective(lp.objective);
  if (!tab.optimise(first_art)) {
    result.status = LpStatus::Unbounded;
    return result;
  }
  result.status = LpStatus::Optimal;
  result.x.assign(n, Rational(0));
  for (std::size_t i = 0; i < tab.rows(); ++i)
    if (tab.basis[i] < n) result.x[tab.basis[i]] = tab.rhs(i);
  result.value = 0;
  for (std::size_t j = 0; j < n; ++j) result.value += lp.objective[j] * result.x[j];
  return result;
}

namespace {

// Reduced row echelon form in place; returns the pivot columns.
std::vector<std::size_t> reduce(Matrix& a, std::size_t columns) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < columns && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && sgn(a[p][c]) == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[r]);
    const Rational lead = a[r][c];
    for (auto& v : a[r]) v /= lead;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || sgn(a[i][c]) == 0) continue;
      const Rational f = a[i][c];
      for (std::size_t j = c; j < columns; ++j) a[i][j] -= f * a[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::size_t matrix_rank(Matrix rows) {
  if (rows.empty()) return 0;
  const std::size_t columns = rows.front().size();
  return reduce(rows, columns).size();
}

Matrix null_space(Matrix rows, std::size_t columns) {
  const auto pivots = reduce(rows, columns);
  std::vector<char> is_pivot(columns, 0);
  for (auto c : pivots) is_pivot[c] = 1;
  Matrix basis;
  for (std::size_t free = 0; free < columns; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(columns);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -rows[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace sbic
