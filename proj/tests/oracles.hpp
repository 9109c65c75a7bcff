// Reference implementations used only by the tests. They avoid the library's
// factorization and freeness code paths.
#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <vector>

#include "fpsz/laws.hpp"
#include "fpsz/linalg.hpp"
#include "fpsz/rational.hpp"
#include "fpsz/words.hpp"

namespace oracle {

using fpsz::ComplexRational;
using fpsz::Rational;

// Laplace expansion along the first row.
template <class T>
T cofactor_det(const std::vector<std::vector<T>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return T(1);
  if (n == 1) return m[0][0];
  T total(0);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<T>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<T> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(row);
    }
    T term = m[0][j] * cofactor_det(minor);
    if (j % 2 == 0) {
      total += term;
    } else {
      total -= term;
    }
  }
  return total;
}

template <class T>
std::vector<std::vector<T>> to_rows(const fpsz::Matrix<T>& a) {
  std::vector<std::vector<T>> out(a.rows(), std::vector<T>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i][j] = a(i, j);
  return out;
}

// Classical Gram-Schmidt on 1, x, x^2, ... against a real moment functional.
// Returns ||P_q||^2 for q = 0..q_max; stops at a zero norm.
inline std::vector<Rational> gram_schmidt_norms(const std::function<Rational(int)>& moment, int q_max) {
  std::vector<std::vector<Rational>> polys;
  std::vector<Rational> norms;
  auto inner = [&](const std::vector<Rational>& p, const std::vector<Rational>& q) {
    Rational s(0);
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = 0; j < q.size(); ++j) s += p[i] * q[j] * moment(static_cast<int>(i + j));
    return s;
  };
  for (int q = 0; q <= q_max; ++q) {
    std::vector<Rational> p(static_cast<std::size_t>(q + 1), Rational(0));
    p.back() = 1;
    for (std::size_t k = 0; k < polys.size(); ++k) {
      Rational c = inner(p, polys[k]) / norms[k];
      for (std::size_t i = 0; i < polys[k].size(); ++i) p[i] -= c * polys[k][i];
    }
    Rational nn = inner(p, p);
    if (sgn(nn) == 0) break;
    polys.push_back(p);
    norms.push_back(nn);
  }
  return norms;
}

// Gram-Schmidt on 1, u, u^2, ... against circle moments c_k = tau(u^k), with
// <f, g> = tau(g^* f).
inline std::vector<Rational> circle_gram_schmidt_norms(const std::function<ComplexRational(int)>& c, int q_max) {
  std::vector<std::vector<ComplexRational>> polys;
  std::vector<Rational> norms;
  auto inner = [&](const std::vector<ComplexRational>& f, const std::vector<ComplexRational>& g) {
    ComplexRational s(0);
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j)
        s += f[i] * fpsz::conj(g[j]) * c(static_cast<int>(i) - static_cast<int>(j));
    return s;
  };
  for (int q = 0; q <= q_max; ++q) {
    std::vector<ComplexRational> p(static_cast<std::size_t>(q + 1), ComplexRational(0));
    p.back() = ComplexRational(1);
    for (std::size_t k = 0; k < polys.size(); ++k) {
      ComplexRational coeff = inner(p, polys[k]) * ComplexRational(Rational(1) / norms[k]);
      for (std::size_t i = 0; i < polys[k].size(); ++i) p[i] -= coeff * polys[k][i];
    }
    Rational nn = inner(p, p).re;
    if (sgn(nn) == 0) break;
    polys.push_back(p);
    norms.push_back(nn);
  }
  return norms;
}

// Set partitions of {0..n-1} as block-label vectors (restricted growth strings).
inline void for_each_partition(int n, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> label(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int i, int blocks) {
    if (i == n) {
      f(label);
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      label[static_cast<std::size_t>(i)] = b;
      rec(i + 1, std::max(blocks, b + 1));
    }
  };
  if (n == 0) {
    f(label);
    return;
  }
  rec(0, 0);
}

inline bool noncrossing(const std::vector<int>& label) {
  const std::size_t n = label.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c)
        for (std::size_t d = c + 1; d < n; ++d)
          if (label[a] == label[c] && label[b] == label[d] && label[a] != label[b]) return false;
  return true;
}

// Free cumulants kappa_1..kappa_K of a self-adjoint law from its moments via
// the noncrossing moment-cumulant relation.
inline std::vector<Rational> free_cumulants(const std::function<Rational(int)>& moment, int K) {
  std::vector<Rational> kappa(static_cast<std::size_t>(K + 1), Rational(0));
  for (int k = 1; k <= K; ++k) {
    Rational rest(0);
    for_each_partition(k, [&](const std::vector<int>& label) {
      if (!noncrossing(label)) return;
      std::map<int, int> sizes;
      for (int l : label) ++sizes[l];
      if (sizes.size() == 1) return;  // the full block is kappa_k itself
      Rational p(1);
      for (auto [b, s] : sizes) p *= kappa[static_cast<std::size_t>(s)];
      rest += p;
    });
    kappa[static_cast<std::size_t>(k)] = moment(k) - rest;
  }
  return kappa;
}

// tau of a word in free self-adjoint variables: sum over noncrossing
// partitions whose blocks are single-coloured of products of free cumulants.
inline Rational free_word_moment(const std::vector<std::vector<Rational>>& cumulants, const fpsz::Word& w) {
  std::vector<int> colours;
  for (const fpsz::Letter& l : w.blocks())
    for (int i = 0; i < l.exponent; ++i) colours.push_back(l.variable - 1);
  Rational total(0);
  for_each_partition(static_cast<int>(colours.size()), [&](const std::vector<int>& label) {
    std::map<int, int> sizes;
    std::map<int, int> colour;
    for (std::size_t i = 0; i < label.size(); ++i) {
      ++sizes[label[i]];
      auto [it, fresh] = colour.try_emplace(label[i], colours[i]);
      if (!fresh && it->second != colours[i]) return;
    }
    if (!noncrossing(label)) return;
    Rational p(1);
    for (auto [b, s] : sizes) p *= cumulants[static_cast<std::size_t>(colour[b])][static_cast<std::size_t>(s)];
    total += p;
  });
  return total;
}

// Periodic trapezoid rule on [0, pi] for smooth integrands in theta.
inline double theta_trapezoid(const std::function<double(double)>& f, int nodes = 4096) {
  const double h = std::numbers::pi / nodes;
  double s = 0.5 * (f(0.0) + f(std::numbers::pi));
  for (int i = 1; i < nodes; ++i) s += f(i * h);
  return s * h;
}

}  // namespace oracle
