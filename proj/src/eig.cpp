#include "mcgl/eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mcgl/parallel.hpp"
#include "mcgl/symbol.hpp"

namespace mcgl {

namespace {

constexpr double kDeflationTol = 1e-14;

// Householder reduction to upper Hessenberg form, accumulating Q.
void hessenberg(Eigen::MatrixXcd& H, Eigen::MatrixXcd& Q) {
    const Eigen::Index n = H.rows();
    Q = Eigen::MatrixXcd::Identity(n, n);
    for (Eigen::Index k = 0; k + 2 < n; ++k) {
        Eigen::VectorXcd x = H.col(k).segment(k + 1, n - k - 1);
        double xnorm = x.norm();
        if (xnorm == 0.0) continue;
        cplx alpha = x(0);
        cplx phase = (std::abs(alpha) == 0.0) ? cplx(1, 0) : alpha / std::abs(alpha);
        Eigen::VectorXcd v = x;
        v(0) += phase * xnorm;
        double vnorm = v.norm();
        if (vnorm == 0.0) continue;
        v /= vnorm;
        // H <- P H P with P = I - 2 v v^*
        H.block(k + 1, 0, n - k - 1, n) -= 2.0 * v * (v.adjoint() * H.block(k + 1, 0, n - k - 1, n));
        H.block(0, k + 1, n, n - k - 1) -= 2.0 * (H.block(0, k + 1, n, n - k - 1) * v) * v.adjoint();
        Q.block(0, k + 1, n, n - k - 1) -= 2.0 * (Q.block(0, k + 1, n, n - k - 1) * v) * v.adjoint();
    }
    // clear the rounding dust below the first subdiagonal
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = j + 2; i < n; ++i) H(i, j) = 0.0;
}

// Eigenvalue of [[a,b],[c,d]] closest to d (Wilkinson shift).
cplx wilkinson_shift(cplx a, cplx b, cplx c, cplx d) {
    cplx tr = a + d;
    cplx det = a * d - b * c;
    cplx disc = std::sqrt(tr * tr - 4.0 * det);
    cplx l1 = 0.5 * (tr + disc);
    cplx l2 = 0.5 * (tr - disc);
    return (std::abs(l1 - d) < std::abs(l2 - d)) ? l1 : l2;
}

struct Givens {
    cplx c;
    cplx s;
};

// Rotation G = [[conj(c), conj(s)], [-s, c]] with G [a; b] = [r; 0].
Givens make_givens(cplx a, cplx b) {
    double norm = std::sqrt(std::norm(a) + std::norm(b));
    if (norm == 0.0 || std::abs(b) == 0.0) return {cplx(1, 0), cplx(0, 0)};
    return {a / norm, b / norm};
}

// One explicit shifted QR sweep on the active block [lo, hi] of H,
// accumulating the transformation into Q.
void qr_step(Eigen::MatrixXcd& H, Eigen::MatrixXcd& Q, Eigen::Index lo, Eigen::Index hi,
             cplx shift) {
    const Eigen::Index n = H.rows();
    std::vector<Givens> rot(static_cast<std::size_t>(hi - lo));
    for (Eigen::Index k = lo; k < hi; ++k) {
        cplx a = (k == lo) ? H(lo, lo) - shift : H(k, k - 1);
        cplx b = (k == lo) ? H(lo + 1, lo) : H(k + 1, k - 1);
        Givens g = make_givens(a, b);
        rot[static_cast<std::size_t>(k - lo)] = g;
        // rows k, k+1
        for (Eigen::Index j = std::max<Eigen::Index>(0, k - 1); j < n; ++j) {
            cplx t1 = H(k, j), t2 = H(k + 1, j);
            H(k, j) = std::conj(g.c) * t1 + std::conj(g.s) * t2;
            H(k + 1, j) = -g.s * t1 + g.c * t2;
        }
    }
    for (Eigen::Index k = lo; k < hi; ++k) {
        const Givens& g = rot[static_cast<std::size_t>(k - lo)];
        // columns k, k+1
        for (Eigen::Index i = 0; i <= std::min(hi, k + 2); ++i) {
            cplx t1 = H(i, k), t2 = H(i, k + 1);
            H(i, k) = g.c * t1 + g.s * t2;
            H(i, k + 1) = -std::conj(g.s) * t1 + std::conj(g.c) * t2;
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            cplx t1 = Q(i, k), t2 = Q(i, k + 1);
            Q(i, k) = g.c * t1 + g.s * t2;
            Q(i, k + 1) = -std::conj(g.s) * t1 + std::conj(g.c) * t2;
        }
    }
}

// Eigenvectors of an upper triangular T by back-substitution, guarded
// against the defective case by an eps-scale floor on the pivots.
Eigen::MatrixXcd triangular_eigenvectors(const Eigen::MatrixXcd& T) {
    const Eigen::Index n = T.rows();
    const double scale = std::max(T.cwiseAbs().maxCoeff(), 1.0);
    const double floor_val = std::numeric_limits<double>::epsilon() * scale;
    Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        X(k, k) = 1.0;
        for (Eigen::Index i = k - 1; i >= 0; --i) {
            cplx num = 0.0;
            for (Eigen::Index j = i + 1; j <= k; ++j) num += T(i, j) * X(j, k);
            cplx den = T(i, i) - T(k, k);
            if (std::abs(den) < floor_val) den = cplx(floor_val, 0.0);
            X(i, k) = -num / den;
        }
        X.col(k).normalize();
    }
    return X;
}

}  // namespace

EigenResult eigenvalues(const Eigen::MatrixXcd& M, bool with_vectors) {
    const Eigen::Index n = M.rows();
    if (n == 0 || M.cols() != n) throw std::invalid_argument("eigenvalues: matrix must be square and nonempty");
    if (!M.allFinite()) throw std::invalid_argument("eigenvalues: non-finite entries");

    EigenResult result;
    if (n == 1) {
        result.values = Eigen::VectorXcd::Constant(1, M(0, 0));
        if (with_vectors) {
            result.vectors = Eigen::MatrixXcd::Identity(1, 1);
            result.backward_error = 0.0;
        }
        return result;
    }

    Eigen::MatrixXcd H = M;
    Eigen::MatrixXcd Q;
    hessenberg(H, Q);

    const double hnorm = std::max(H.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    const long max_iter = 100 * static_cast<long>(n);
    long iter = 0;
    long stuck = 0;
    Eigen::Index hi = n - 1;
    while (hi > 0) {
        // deflate negligible subdiagonals
        for (Eigen::Index i = 0; i < hi; ++i) {
            double small = kDeflationTol * (std::abs(H(i, i)) + std::abs(H(i + 1, i + 1)));
            if (small == 0.0) small = kDeflationTol * hnorm;
            if (std::abs(H(i + 1, i)) <= small) H(i + 1, i) = 0.0;
        }
        if (H(hi, hi - 1) == 0.0) {
            --hi;
            stuck = 0;
            continue;
        }
        // active block [lo, hi]
        Eigen::Index lo = hi;
        while (lo > 0 && H(lo, lo - 1) != 0.0) --lo;

        if (++iter > max_iter) {
            Eigen::VectorXcd partial = H.diagonal();
            throw ConvergenceError("QR iteration did not converge within " +
                                       std::to_string(max_iter) + " sweeps",
                                   partial);
        }
        cplx shift;
        if (++stuck % 11 == 10) {
            // exceptional shift to break slow cycles
            shift = H(hi, hi) + 0.75 * std::abs(H(hi, hi - 1));
        } else {
            shift = wilkinson_shift(H(hi - 1, hi - 1), H(hi - 1, hi), H(hi, hi - 1), H(hi, hi));
        }
        qr_step(H, Q, lo, hi, shift);
    }

    result.values = H.diagonal();
    if (with_vectors) {
        Eigen::MatrixXcd X = triangular_eigenvectors(H);
        Eigen::MatrixXcd V = Q * X;
        for (Eigen::Index k = 0; k < n; ++k) V.col(k).normalize();
        result.vectors = V;
        double mnorm = std::max(M.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
        double worst = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            double res = (M * V.col(k) - result.values(k) * V.col(k)).norm();
            worst = std::max(worst, res / mnorm);
        }
        result.backward_error = worst;
    }
    return result;
}

std::pair<std::vector<int>, double> match_multisets(const Eigen::VectorXcd& a,
                                                    const Eigen::VectorXcd& b) {
    const int n = static_cast<int>(a.size());
    if (b.size() != n) throw std::invalid_argument("match_multisets: size mismatch");
    // Hungarian algorithm with potentials, O(n^3).
    std::vector<std::vector<double>> cost(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cost[i][j] = std::abs(a(i) - b(j));

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, false);
        do {
            used[j0] = true;
            int i0 = p[j0], j1 = 0;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> perm(n, -1);
    double total = 0.0;
    for (int j = 1; j <= n; ++j) {
        if (p[j] > 0) {
            perm[p[j] - 1] = j - 1;
            total += cost[p[j] - 1][j - 1];
        }
    }
    return {perm, total};
}

double multiset_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    auto [perm, total] = match_multisets(a, b);
    double worst = 0.0;
    for (int i = 0; i < static_cast<int>(perm.size()); ++i)
        worst = std::max(worst, std::abs(a(i) - b(perm[i])));
    return worst;
}

namespace {

// Matches values_a at sigma_a to the spectrum at sigma_b, bisecting the
// interval when the assignment cost looks like a crossing in progress.
// Returns the permutation a-index -> eigenvalue at sigma_b, the spectrum
// at sigma_b in a-order, and whether refinement bottomed out.
struct ChainResult {
    Eigen::VectorXcd values;
    bool exhausted = false;
};

ChainResult chain_match(const SymbolTriple& symbol, double sigma_a,
                        const Eigen::VectorXcd& values_a, double sigma_b, double cost_threshold,
                        int depth) {
    Eigen::VectorXcd vb = eigenvalues(symbol.assemble(sigma_b), false).values;
    auto [perm, total] = match_multisets(values_a, vb);
    if (total <= cost_threshold || depth >= 8) {
        ChainResult out;
        out.values.resize(values_a.size());
        for (int i = 0; i < values_a.size(); ++i) out.values(i) = vb(perm[i]);
        out.exhausted = (total > cost_threshold);
        return out;
    }
    double mid = 0.5 * (sigma_a + sigma_b);
    ChainResult first = chain_match(symbol, sigma_a, values_a, mid, cost_threshold, depth + 1);
    ChainResult second = chain_match(symbol, mid, first.values, sigma_b, cost_threshold, depth + 1);
    second.exhausted = second.exhausted || first.exhausted;
    return second;
}

}  // namespace

SpectrumCurve track_branches(const SymbolTriple& symbol, const std::vector<double>& sigma_grid) {
    if (sigma_grid.size() < 2) throw std::invalid_argument("track_branches: grid needs >= 2 points");
    if (!std::is_sorted(sigma_grid.begin(), sigma_grid.end()))
        throw std::invalid_argument("track_branches: grid must be sorted");

    const std::size_t K = sigma_grid.size();
    const int n = static_cast<int>(symbol.size());

    std::vector<Eigen::VectorXcd> spectra(K);
    parallel_for(K, [&](std::size_t k) {
        try {
            spectra[k] = eigenvalues(symbol.assemble(sigma_grid[k]), false).values;
        } catch (const std::exception& e) {
            throw std::runtime_error("eigensolve failed at sigma = " +
                                     std::to_string(sigma_grid[k]) + ": " + e.what());
        }
    });

    SpectrumCurve curve;
    curve.sigma_grid = sigma_grid;
    curve.branches.assign(n, std::vector<cplx>(K));
    curve.crossing_flags.assign(K - 1, false);
    for (int j = 0; j < n; ++j) curve.branches[j][0] = spectra[0](j);

    std::vector<double> recent_costs;
    Eigen::VectorXcd prev = spectra[0];
    for (std::size_t k = 1; k < K; ++k) {
        auto [perm, total] = match_multisets(prev, spectra[k]);
        double median = 0.0;
        if (!recent_costs.empty()) {
            std::vector<double> tail(recent_costs.end() - std::min<std::size_t>(recent_costs.size(), 5),
                                     recent_costs.end());
            std::sort(tail.begin(), tail.end());
            median = tail[tail.size() / 2];
        }
        double threshold = 10.0 * std::max(median, 1e-12);
        Eigen::VectorXcd matched(n);
        if (!recent_costs.empty() && total > threshold) {
            ChainResult chain = chain_match(symbol, sigma_grid[k - 1], prev, sigma_grid[k],
                                            threshold, 0);
            matched = chain.values;
            curve.crossing_flags[k - 1] = chain.exhausted;
        } else {
            for (int i = 0; i < n; ++i) matched(i) = spectra[k](perm[i]);
        }
        for (int j = 0; j < n; ++j) curve.branches[j][k] = matched(j);
        curve.matching_cost += total;
        recent_costs.push_back(total);
        prev = matched;
    }
    return curve;
}

}  // namespace mcgl
