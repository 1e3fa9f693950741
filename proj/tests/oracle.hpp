#pragma once

// Direct-formula reference implementations used only by the tests. They work
// on plain nested vectors and share no code with the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

inline double cosine(const Vec& a, const Vec& b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / std::sqrt(aa * bb);
}

inline double euclid_sim(const Vec& a, const Vec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::pow(a[i] - b[i], 2);
  return 1.0 / (1.0 + std::sqrt(s));
}

// 1-based rank by counting how many components come first; 0 when outside top_n.
inline std::vector<int> ranks(const Vec& v, bool descending, std::size_t top_n) {
  std::vector<int> r(v.size());
  for (std::size_t c = 0; c < v.size(); ++c) {
    int ahead = 0;
    for (std::size_t o = 0; o < v.size(); ++o) {
      const bool strictly = descending ? v[o] > v[c] : v[o] < v[c];
      if (strictly || (v[o] == v[c] && o < c)) ++ahead;
    }
    r[c] = static_cast<std::size_t>(ahead) < top_n ? ahead + 1 : 0;
  }
  return r;
}

inline double apsyn(const Vec& a, const Vec& b, std::size_t top_n) {
  const auto ra = ranks(a, true, top_n);
  const auto rb = ranks(b, true, top_n);
  double s = 0;
  for (std::size_t c = 0; c < a.size(); ++c)
    if (ra[c] && rb[c]) s += 2.0 / (ra[c] + rb[c]);
  return s;
}

inline double score(int rank, double k, std::size_t d) {
  return std::exp(-rank * k / static_cast<double>(d));
}

inline double resm_one(const Vec& a, const Vec& b, const Mat& context, double k,
                       std::size_t top_n, bool descending) {
  const std::size_t d = a.size();
  const auto ra = ranks(a, descending, top_n);
  const auto rb = ranks(b, descending, top_n);
  double s = 0;
  for (std::size_t c = 0; c < d; ++c) {
    if (!ra[c] || !rb[c]) continue;
    double h = context.empty() ? 1.0 : 0.0;
    for (const auto& w : context) {
      const auto rw = ranks(w, descending, top_n);
      if (rw[c]) h += score(rw[c], k, d);
    }
    if (h == 0.0) continue;
    s += score(ra[c], k, d) * score(rb[c], k, d) / h;
  }
  return s;
}

inline double resm(const Vec& a, const Vec& b, const Mat& context, double k, std::size_t top_n) {
  return resm_one(a, b, context, k, top_n, false) + resm_one(a, b, context, k, top_n, true);
}

// Full sort of every other point by (cosine desc, index asc), truncated to k.
inline std::vector<std::size_t> knn(const Mat& points, const Vec& q, std::size_t k,
                                    long exclude) {
  std::vector<std::pair<double, std::size_t>> all;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (static_cast<long>(i) != exclude) all.emplace_back(cosine(points[i], q), i);
  std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
    return x.first != y.first ? x.first > y.first : x.second < y.second;
  });
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(all[i].second);
  return out;
}

inline double koccurrence_skewness(const Mat& points, std::size_t k) {
  std::vector<double> counts(points.size(), 0.0);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (auto j : knn(points, points[i], k, static_cast<long>(i))) counts[j] += 1;
  const double n = static_cast<double>(counts.size());
  double mean = 0;
  for (double c : counts) mean += c / n;
  double m2 = 0, m3 = 0;
  for (double c : counts) {
    m2 += std::pow(c - mean, 2) / n;
    m3 += std::pow(c - mean, 3) / n;
  }
  return m2 == 0 ? 0.0 : m3 / std::pow(m2, 1.5);
}

// Jacobi retrofit written as plain loops. l2 selects the normalized variant.
inline Mat retrofit(Mat v, const std::map<std::size_t, std::vector<std::size_t>>& lex,
                    int iterations, bool l2) {
  auto norm = [](const Vec& x) {
    double s = 0;
    for (double c : x) s += c * c;
    return std::sqrt(s);
  };
  for (int it = 0; it < iterations; ++it) {
    Mat next = v;
    for (const auto& [head, syns] : lex) {
      for (std::size_t c = 0; c < v[head].size(); ++c) {
        double mean = 0;
        for (auto j : syns) mean += (l2 ? v[j][c] / norm(v[j]) : v[j][c]);
        mean /= static_cast<double>(syns.size());
        next[head][c] = l2 ? norm(v[head]) * (v[head][c] / norm(v[head]) + mean) / 2
                           : (v[head][c] + mean) / 2;
      }
    }
    v = std::move(next);
  }
  return v;
}

inline Mat gaussian_cloud(std::size_t n, std::size_t d, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(n, Vec(d));
  for (auto& row : m)
    for (auto& x : row) x = g(rng);
  return m;
}

}  // namespace oracle
