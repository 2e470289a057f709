#pragma once

// Independent test oracles. Everything here recomputes expected values by a
// route that does not share code with the library implementation.

#include <Eigen/Dense>

#include <random>
#include <vector>

namespace oracles {

/// S_r by explicit enumeration of all r-element index subsets. O(2^n); only
/// usable for the n <= 8 cases the tests exercise.
inline double subset_sum_sr(const Eigen::VectorXd& lambda, int r) {
    const int n = static_cast<int>(lambda.size());
    if (r == 0) return 1.0;
    double total = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) != r) continue;
        double prod = 1.0;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) prod *= lambda[i];
        total += prod;
    }
    return total;
}

inline Eigen::MatrixXd random_symmetric(int n, std::mt19937_64& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            const double v = dist(rng);
            m(i, j) = v;
            m(j, i) = v;
        }
    return m;
}

inline Eigen::VectorXd random_vector(int n, std::mt19937_64& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = dist(rng);
    return v;
}

/// Composite Simpson quadrature of f over [a, b].
template <typename F>
double simpson(F&& f, double a, double b, int intervals = 2048) {
    if (intervals % 2) ++intervals;
    const double h = (b - a) / intervals;
    double acc = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace oracles
