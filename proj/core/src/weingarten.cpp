#include "ringlab/weingarten.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace ringlab::weingarten {
namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

std::vector<Perm> symmetric_group(int k) {
  std::vector<int> images(static_cast<std::size_t>(k));
  std::iota(images.begin(), images.end(), 0);
  std::vector<Perm> group;
  do {
    group.emplace_back(images);
  } while (std::next_permutation(images.begin(), images.end()));
  return group;
}

mpz_class int_pow(long base, unsigned long exp) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base), exp);
  return out;
}

// Exact Gaussian elimination; the class Gram matrix is invertible for n >= k.
std::vector<Rational> solve_rational(std::vector<std::vector<Rational>> m,
                                     std::vector<Rational> rhs) {
  const std::size_t dim = rhs.size();
  for (std::size_t col = 0; col < dim; ++col) {
    std::size_t pivot = col;
    while (pivot < dim && m[pivot][col] == 0) ++pivot;
    if (pivot == dim) throw std::runtime_error("weingarten: singular Gram system");
    std::swap(m[pivot], m[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (std::size_t row = 0; row < dim; ++row) {
      if (row == col || m[row][col] == 0) continue;
      const Rational factor = m[row][col] / m[col][col];
      for (std::size_t j = col; j < dim; ++j) m[row][j] -= factor * m[col][j];
      rhs[row] -= factor * rhs[col];
    }
  }
  std::vector<Rational> out(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    out[i] = rhs[i] / m[i][i];
    out[i].canonicalize();
  }
  return out;
}

}  // namespace

Perm::Perm(std::vector<int> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (int v : images_) {
    require(v >= 0 && v < size() && !seen[static_cast<std::size_t>(v)],
            "Perm: images must form a bijection");
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Perm Perm::identity(int k) {
  std::vector<int> images(static_cast<std::size_t>(k));
  std::iota(images.begin(), images.end(), 0);
  return Perm(std::move(images));
}

Perm Perm::transposition(int k, int a, int b) {
  auto p = identity(k);
  std::swap(p.images_[static_cast<std::size_t>(a)], p.images_[static_cast<std::size_t>(b)]);
  return p;
}

Perm Perm::inverse() const {
  std::vector<int> inv(images_.size());
  for (int i = 0; i < size(); ++i) inv[static_cast<std::size_t>(images_[static_cast<std::size_t>(i)])] = i;
  return Perm(std::move(inv));
}

Perm Perm::after(const Perm& other) const {
  require(size() == other.size(), "Perm: size mismatch in composition");
  std::vector<int> images(images_.size());
  for (int i = 0; i < size(); ++i) images[static_cast<std::size_t>(i)] = (*this)(other(i));
  return Perm(std::move(images));
}

std::vector<int> Perm::cycle_type() const {
  std::vector<bool> seen(images_.size(), false);
  std::vector<int> type;
  for (int start = 0; start < size(); ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    int len = 0;
    for (int cur = start; !seen[static_cast<std::size_t>(cur)]; cur = (*this)(cur)) {
      seen[static_cast<std::size_t>(cur)] = true;
      ++len;
    }
    type.push_back(len);
  }
  std::sort(type.rbegin(), type.rend());
  return type;
}

int Perm::cycle_count() const {
  std::vector<bool> seen(images_.size(), false);
  int cycles = 0;
  for (int start = 0; start < size(); ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    ++cycles;
    for (int cur = start; !seen[static_cast<std::size_t>(cur)]; cur = (*this)(cur))
      seen[static_cast<std::size_t>(cur)] = true;
  }
  return cycles;
}

const Rational& WeingartenTable::at(const std::vector<int>& cycle_type) const {
  auto it = values.find(cycle_type);
  if (it == values.end()) throw std::invalid_argument("WeingartenTable: unknown cycle type");
  return it->second;
}

WeingartenTable build_table(int k, long n) {
  require(k >= 1, "weingarten: order must be positive");
  if (k > kMaxOrder) throw std::invalid_argument("weingarten: order cap (k <= 7)");
  if (n < k) throw std::invalid_argument("weingarten: requires n >= k");

  const auto group = symmetric_group(k);

  // One representative per cycle type; Wg is a class function.
  std::vector<std::vector<int>> types;
  std::vector<const Perm*> reps;
  std::map<std::vector<int>, std::size_t> type_index;
  for (const auto& perm : group) {
    auto type = perm.cycle_type();
    if (type_index.emplace(type, types.size()).second) {
      types.push_back(std::move(type));
      reps.push_back(&perm);
    }
  }

  // Class-reduced Gram system: row sigma_lambda, columns grouped by the
  // type of tau.
  const std::size_t classes = types.size();
  std::vector<std::vector<Rational>> gram(classes, std::vector<Rational>(classes, Rational(0)));
  for (std::size_t row = 0; row < classes; ++row) {
    const Perm inv = reps[row]->inverse();
    for (const auto& tau : group) {
      const std::size_t col = type_index.at(tau.cycle_type());
      gram[row][col] += Rational(int_pow(n, static_cast<unsigned long>(inv.after(tau).cycle_count())));
    }
  }

  std::vector<Rational> rhs(classes, Rational(0));
  rhs[type_index.at(Perm::identity(k).cycle_type())] = 1;

  auto solution = solve_rational(std::move(gram), std::move(rhs));

  WeingartenTable out;
  out.k = k;
  out.n = n;
  for (std::size_t i = 0; i < classes; ++i) out.values.emplace(types[i], solution[i]);
  return out;
}

const WeingartenTable& table(int k, long n) {
  static std::mutex mutex;
  static std::map<std::pair<int, long>, WeingartenTable> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto [it, inserted] = cache.try_emplace({k, n});
  if (inserted) it->second = build_table(k, n);
  return it->second;
}

Rational weingarten(const Perm& sigma, long n) {
  return table(sigma.size(), n).at(sigma.cycle_type());
}

namespace {

// All permutations sigma with left[t] == right[sigma(t)] for every t.
void matchings_rec(std::span<const int> left, std::span<const int> right, int t,
                   std::vector<int>& image, std::vector<bool>& used,
                   std::vector<Perm>& out) {
  const int k = static_cast<int>(left.size());
  if (t == k) {
    out.emplace_back(image);
    return;
  }
  for (int j = 0; j < k; ++j) {
    if (used[static_cast<std::size_t>(j)] || right[static_cast<std::size_t>(j)] != left[static_cast<std::size_t>(t)])
      continue;
    used[static_cast<std::size_t>(j)] = true;
    image[static_cast<std::size_t>(t)] = j;
    matchings_rec(left, right, t + 1, image, used, out);
    used[static_cast<std::size_t>(j)] = false;
  }
}

std::vector<Perm> matchings(std::span<const int> left, std::span<const int> right) {
  std::vector<Perm> out;
  std::vector<int> image(left.size(), 0);
  std::vector<bool> used(left.size(), false);
  matchings_rec(left, right, 0, image, used, out);
  return out;
}

}  // namespace

Rational unitary_moment(std::span<const int> rows, std::span<const int> cols,
                        std::span<const int> rows_conj, std::span<const int> cols_conj,
                        long n) {
  const auto k = static_cast<int>(rows.size());
  require(k >= 1, "unitary_moment: empty factor list");
  require(cols.size() == rows.size() && rows_conj.size() == rows.size() &&
              cols_conj.size() == rows.size(),
          "unitary_moment: tuple lengths must agree");
  if (k > kMaxOrder) throw std::invalid_argument("weingarten: order cap (k <= 7)");
  if (n < k) throw std::invalid_argument("weingarten: requires n >= k");

  const auto row_perms = matchings(rows, rows_conj);
  if (row_perms.empty()) return Rational(0);
  const auto col_perms = matchings(cols, cols_conj);
  if (col_perms.empty()) return Rational(0);

  const auto& wg = table(k, n);
  Rational acc(0);
  for (const auto& sigma : row_perms) {
    const Perm sigma_inv = sigma.inverse();
    for (const auto& tau : col_perms) acc += wg.at(tau.after(sigma_inv).cycle_type());
  }
  acc.canonicalize();
  return acc;
}

Complex four_trace_expectation(const ComplexMatrix& a, const ComplexMatrix& b,
                               const ComplexMatrix& c, const ComplexMatrix& d, long n) {
  require(a.rows() == n && a.cols() == n && b.rows() == n && b.cols() == n &&
              c.rows() == n && c.cols() == n && d.rows() == n && d.cols() == n,
          "four_trace_expectation: all matrices must be n x n");
  require(n >= 1, "four_trace_expectation: n must be positive");
  if (n == 1) return (a * b * c * d)(0, 0);  // dimension-1 V cancels

  const Complex tr_a = a.trace();
  const Complex tr_b = b.trace();
  const Complex tr_c = c.trace();
  const Complex tr_d = d.trace();
  const Complex tr_ac = (a * c).trace();
  const Complex tr_bd = (b * d).trace();

  const double nn = static_cast<double>(n);
  const double n2m1 = nn * nn - 1.0;
  return (tr_ac * tr_b * tr_d + tr_a * tr_c * tr_bd) / n2m1 -
         (tr_ac * tr_bd + tr_a * tr_c * tr_b * tr_d) / (nn * n2m1);
}

}  // namespace ringlab::weingarten
