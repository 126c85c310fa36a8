#pragma once

// Uniform grid on [0, x_max] with linear interpolation and an exponential
// tail past x_max, plus the family of damped running integrals ("sweeps")
// every operator application reduces to. The sweep recurrences are exact for
// the interpolant-plus-tail, so applying an operator involves no quadrature
// tolerance at all; discretization error enters only through the
// interpolation of the iterates themselves.

#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"

namespace levypass {

struct GridSpec {
    double x_max = 0.0;  // <= 0: derive from the model's decay rates
    int n_points = 2001;
    double gamma = 0.0;  // weighted-norm rate; <= 0: minimize the contraction factor
};

class GridFunction {
public:
    GridFunction() = default;
    GridFunction(double x_max, int n_points, double tail_rate = 0.0)
        : n_(n_points), tail_(tail_rate) {
        if (n_points < 2 || !(x_max > 0.0))
            throw ConfigError("grid needs x_max > 0 and n_points >= 2");
        h_ = x_max / (n_points - 1);
        xm_ = h_ * (n_points - 1);
        v_.assign(static_cast<std::size_t>(n_points), 0.0);
    }

    int size() const { return n_; }
    double h() const { return h_; }
    double x_max() const { return xm_; }
    double x(int i) const { return h_ * i; }
    double tail_rate() const { return tail_; }
    void set_tail_rate(double r) { tail_ = r; }

    double& operator[](int i) { return v_[static_cast<std::size_t>(i)]; }
    const double& operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }
    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }

    /// Linear between nodes, constant left of 0, rate-tail_rate exponential
    /// right of x_max.
    double operator()(double t) const {
        if (t <= 0.0) return v_.front();
        if (t >= xm_) return v_.back() * std::exp(-tail_ * (t - xm_));
        double s = t / h_;
        int j = static_cast<int>(s);
        if (j > n_ - 2) j = n_ - 2;
        double w = s - j;
        return v_[j] + w * (v_[j + 1] - v_[j]);
    }

    /// sup over nodes of e^{gamma x_i} |v_i|, the norm the contraction
    /// estimates are stated in.
    double wnorm(double gamma) const {
        double m = 0.0;
        for (int i = 0; i < n_; ++i)
            m = std::max(m, std::exp(gamma * x(i)) * std::abs(v_[static_cast<std::size_t>(i)]));
        return m;
    }

    static double wdiff(const GridFunction& a, const GridFunction& b, double gamma) {
        if (a.n_ != b.n_) throw std::logic_error("wdiff: grid size mismatch");
        double m = 0.0;
        for (int i = 0; i < a.n_; ++i) {
            std::size_t k = static_cast<std::size_t>(i);
            m = std::max(m, std::exp(gamma * a.x(i)) * std::abs(a.v_[k] - b.v_[k]));
        }
        return m;
    }

private:
    int n_ = 0;
    double h_ = 0.0, xm_ = 0.0, tail_ = 0.0;
    std::vector<double> v_;
};

/// Int_0^t e^{-q b} g(b) db, exact on the interpolant; t past x_max runs into
/// the tail closed form. Complex q allowed.
template <class S>
S grid_damped_partial(const GridFunction& g, S q, double t) {
    if (t <= 0.0) return S(0);
    const auto& v = g.values();
    double h = g.h();
    int n = g.size();
    S out(0);
    int full = static_cast<int>(t / h);
    if (full > n - 1) full = n - 1;
    for (int i = 0; i < full; ++i)
        out += std::exp(-q * g.x(i)) * num::cell_exp_linear(-q, h, v[i], v[i + 1]);
    double base = g.x(full);
    double d = t - base;
    if (d <= 0.0) return out;
    if (full >= n - 1) {
        // inside the tail: v_last e^{-tail u} from x_max to t
        S r = q + g.tail_rate();
        return out + v[n - 1] * std::exp(-q * g.x_max()) * d * num::eta0(-r * d);
    }
    return out + std::exp(-q * base) * num::cell_exp_linear(-q, d, v[full], g(t));
}

/// Int_0^inf e^{-q b} g(b) db; requires Re q + tail_rate > 0.
template <class S>
S grid_damped_total(const GridFunction& g, S q) {
    S r = q + g.tail_rate();
    if (!(num::real_part(r) > 0.0))
        throw DomainError("grid transform: Re q + tail rate must be positive");
    const auto& v = g.values();
    double h = g.h();
    int n = g.size();
    S out = v[n - 1] * std::exp(-q * g.x_max()) / r;
    for (int i = 0; i < n - 1; ++i)
        out += std::exp(-q * g.x(i)) * num::cell_exp_linear(-q, h, v[i], v[i + 1]);
    return out;
}

/// Damped running integrals of one grid function at a fixed set of rates,
/// each built once in O(n) and queried at arbitrary points, including past
/// x_max (tail closed forms) and, for suffix-type sweeps, at t <= 0 (snapped
/// to 0, where the grid function starts).
///
///   prefix  P_r(t) = Int_0^t e^{-r(t-b)} G(b) db
///   cum     C_r(t) = Int_0^t e^{-r b} G(b) db
///   suffix  S_r(t) = Int_t^inf e^{-r(b-t)} G(b) db
///   moment_prefix M_m(t) = Int_0^t (t-b) e^{-m(t-b)} G(b) db
///   moment_suffix N_m(t) = Int_t^inf (b-t) e^{-m(b-t)} G(b) db
///
/// The moment sweeps exist to evaluate divided differences of prefix/suffix
/// across nearly equal rates (dd_prefix / dd_suffix below); registering a
/// moment rate registers the plain sweep it rides on.
class Sweeps {
public:
    struct Request {
        std::vector<double> prefix, suffix, cum, moment_prefix, moment_suffix;
    };

    /// Rates a and b too close for the subtracted divided difference; the
    /// midpoint moment sweep is exact to O((b-a)^2) there.
    static bool near_rates(double a, double b) {
        return std::abs(a - b) <= 1e-4 * std::max(std::abs(a), std::abs(b));
    }

    Sweeps(const GridFunction& g, Request req) : g_(&g) {
        n_ = g.size();
        h_ = g.h();
        xm_ = g.x_max();
        gt_ = g.tail_rate();
        for (double m : req.moment_prefix) req.prefix.push_back(m);
        for (double m : req.moment_suffix) req.suffix.push_back(m);
        req.cum.push_back(0.0);  // integrated prefix/suffix identities use it
        for (double r : req.prefix) build_prefix(r);
        for (double r : req.cum) build_cum(r);
        for (double r : req.suffix) build_suffix(r);
        for (double m : req.moment_prefix) build_mprefix(m);
        for (double m : req.moment_suffix) build_msuffix(m);
    }

    double prefix(double r, double t) const {
        const auto& a = at(dp_, r, "prefix");
        if (t <= 0.0) return 0.0;
        if (t >= xm_) {
            double d = t - xm_;
            return std::exp(-r * d) * a[n_ - 1] + last() * num::dexp_ratio(gt_, r, d);
        }
        auto [j, d] = locate(t);
        if (d == 0.0) return a[j];
        return std::exp(-r * d) * a[j] + num::cell_exp_linear(-r, d, (*g_)(t), val(j));
    }

    double cum(double r, double t) const {
        const auto& a = at(cu_, r, "cum");
        if (t <= 0.0) return 0.0;
        if (t >= xm_) {
            double d = t - xm_;
            return a[n_ - 1] + last() * std::exp(-r * xm_) * d * num::eta0(-(r + gt_) * d);
        }
        auto [j, d] = locate(t);
        if (d == 0.0) return a[j];
        return a[j] + std::exp(-r * (h_ * j)) * num::cell_exp_linear(-r, d, val(j), (*g_)(t));
    }

    double cum_inf(double r) const {
        const auto& a = at(cu_, r, "cum");
        if (!(r + gt_ > 0.0))
            throw DomainError("cum_inf: rate + tail rate must be positive");
        return a[n_ - 1] + last() * std::exp(-r * xm_) / (r + gt_);
    }

    double suffix(double r, double t) const {
        const auto& a = at(sf_, r, "suffix");
        if (t <= 0.0) return a[0];
        if (t >= xm_) return (*g_)(t) / (r + gt_);
        auto [j, d] = locate(t);
        if (d == 0.0) return a[j];
        double w = h_ - d;
        return num::cell_exp_linear(-r, w, (*g_)(t), val(j + 1)) + std::exp(-r * w) * a[j + 1];
    }

    /// Int_0^T prefix(sigma, t) dt; exact via C_0 - P_sigma = sigma * I.
    double iprefix(double sigma, double T) const {
        if (T <= 0.0) return 0.0;
        return (cum(0.0, T) - prefix(sigma, T)) / sigma;
    }

    /// Int_0^T suffix(tau, t) dt; exact via C_0 + S_tau(T) - S_tau(0) = tau * I.
    double isuffix(double tau, double T) const {
        if (T <= 0.0) return 0.0;
        const auto& a = at(sf_, tau, "suffix");
        return (cum(0.0, T) + suffix(tau, T) - a[0]) / tau;
    }

    double moment_prefix(double m, double t) const {
        const auto& a = at(mp_, m, "moment_prefix");
        const auto& dp = at(dp_, m, "prefix");
        if (t <= 0.0) return 0.0;
        if (t >= xm_) {
            double d = t - xm_;
            double carried = std::exp(-m * d) * (a[n_ - 1] + d * dp[n_ - 1]);
            if (d == 0.0) return carried;
            double J[2];
            num::powexp_cell(m - gt_, d, 1, J);
            return carried + last() * std::exp(-gt_ * d) * J[1];
        }
        auto [j, d] = locate(t);
        if (d == 0.0) return a[j];
        double gv = (*g_)(t);
        double J[3];
        num::powexp_cell(m, d, 2, J);
        return std::exp(-m * d) * (a[j] + d * dp[j]) + gv * J[1] + (val(j) - gv) * J[2] / d;
    }

    double moment_suffix(double m, double t) const {
        const auto& a = at(ms_, m, "moment_suffix");
        if (t <= 0.0) return a[0];
        if (t >= xm_) {
            double r = m + gt_;
            return (*g_)(t) / (r * r);
        }
        auto [j, d] = locate(t);
        if (d == 0.0) return a[j];
        const auto& sf = at(sf_, m, "suffix");
        double w = h_ - d;
        double gv = (*g_)(t);
        double J[3];
        num::powexp_cell(m, w, 2, J);
        return gv * J[1] + (val(j + 1) - gv) * J[2] / w +
               std::exp(-m * w) * (a[j + 1] + w * sf[j + 1]);
    }

    /// (prefix(a,t) - prefix(b,t)) / (b - a); midpoint moment sweep across
    /// nearly equal rates (register it for any pair that can get close).
    double dd_prefix(double a, double b, double t) const {
        if (near_rates(a, b)) return moment_prefix(0.5 * (a + b), t);
        return (prefix(a, t) - prefix(b, t)) / (b - a);
    }

    /// (suffix(a,t) - suffix(b,t)) / (b - a), same contract as dd_prefix.
    double dd_suffix(double a, double b, double t) const {
        if (near_rates(a, b)) return moment_suffix(0.5 * (a + b), t);
        return (suffix(a, t) - suffix(b, t)) / (b - a);
    }

private:
    using Table = std::map<double, std::vector<double>>;

    double val(int i) const { return g_->values()[static_cast<std::size_t>(i)]; }
    double last() const { return g_->values()[static_cast<std::size_t>(n_ - 1)]; }

    static const std::vector<double>& at(const Table& tbl, double r, const char* kind) {
        auto it = tbl.find(r);
        if (it == tbl.end())
            throw std::logic_error(std::string("sweep rate not registered: ") + kind);
        return it->second;
    }

    // j in [0, n-2], d = t - x_j in [0, h); caller handles t outside (0, x_max)
    std::pair<int, double> locate(double t) const {
        int j = static_cast<int>(t / h_);
        if (j > n_ - 2) j = n_ - 2;
        double d = t - h_ * j;
        return {j, d < 0.0 ? 0.0 : d};
    }

    void build_prefix(double r) {
        if (dp_.count(r)) return;
        auto& a = dp_[r];
        a.assign(static_cast<std::size_t>(n_), 0.0);
        double eh = std::exp(-r * h_);
        for (int i = 0; i + 1 < n_; ++i)
            a[i + 1] = eh * a[i] + num::cell_exp_linear(-r, h_, val(i + 1), val(i));
    }

    void build_cum(double r) {
        if (cu_.count(r)) return;
        auto& a = cu_[r];
        a.assign(static_cast<std::size_t>(n_), 0.0);
        for (int i = 0; i + 1 < n_; ++i)
            a[i + 1] = a[i] + std::exp(-r * (h_ * i)) *
                                  num::cell_exp_linear(-r, h_, val(i), val(i + 1));
    }

    void build_suffix(double r) {
        if (sf_.count(r)) return;
        if (!(r + gt_ > 0.0))
            throw DomainError("suffix sweep: rate + tail rate must be positive");
        auto& a = sf_[r];
        a.assign(static_cast<std::size_t>(n_), 0.0);
        a[n_ - 1] = last() / (r + gt_);
        double eh = std::exp(-r * h_);
        for (int i = n_ - 2; i >= 0; --i)
            a[i] = num::cell_exp_linear(-r, h_, val(i), val(i + 1)) + eh * a[i + 1];
    }

    void build_mprefix(double m) {
        if (mp_.count(m)) return;
        const auto& dp = dp_.at(m);
        auto& a = mp_[m];
        a.assign(static_cast<std::size_t>(n_), 0.0);
        double eh = std::exp(-m * h_);
        double J[3];
        num::powexp_cell(m, h_, 2, J);
        for (int i = 0; i + 1 < n_; ++i)
            a[i + 1] = eh * (a[i] + h_ * dp[i]) + val(i + 1) * J[1] +
                       (val(i) - val(i + 1)) * J[2] / h_;
    }

    void build_msuffix(double m) {
        if (ms_.count(m)) return;
        const auto& sf = sf_.at(m);
        auto& a = ms_[m];
        a.assign(static_cast<std::size_t>(n_), 0.0);
        double rm = m + gt_;
        a[n_ - 1] = last() / (rm * rm);
        double eh = std::exp(-m * h_);
        double J[3];
        num::powexp_cell(m, h_, 2, J);
        for (int i = n_ - 2; i >= 0; --i)
            a[i] = val(i) * J[1] + (val(i + 1) - val(i)) * J[2] / h_ +
                   eh * (a[i + 1] + h_ * sf[i + 1]);
    }

    const GridFunction* g_ = nullptr;
    int n_ = 0;
    double h_ = 0.0, xm_ = 0.0, gt_ = 0.0;
    Table dp_, cu_, sf_, mp_, ms_;
};

} // namespace levypass
