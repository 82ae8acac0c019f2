#include "ruinlab/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ruinlab/error.hpp"

namespace ruinlab {

std::vector<double> OdeSystem::operator()(double u, std::span<const double> y) const {
    std::vector<double> out(dimension);
    rhs(u, y, out);
    return out;
}

std::span<const double> Trajectory::node_state(std::size_t i) const {
    if (i >= nodes_.size()) throw std::out_of_range("trajectory node index");
    return {states_.data() + i * dim_, dim_};
}

std::size_t Trajectory::step_containing(double u) const {
    if (nodes_.size() < 2 || !(u >= nodes_.front() && u <= nodes_.back()))
        throw std::out_of_range("query u = " + std::to_string(u) + " outside trajectory span");
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), u);
    auto k = static_cast<std::size_t>(it - nodes_.begin());
    return std::min(k, nodes_.size() - 1) - 1;
}

void Trajectory::at(double u, std::span<double> out) const {
    if (nodes_.size() == 1 && u == nodes_.front()) {
        std::copy_n(states_.begin(), dim_, out.begin());
        return;
    }
    const std::size_t k = step_containing(u);
    const double u0 = nodes_[k];
    const double u1 = nodes_[k + 1];
    if (u == u0 || u == u1) {
        auto s = node_state(u == u0 ? k : k + 1);
        std::copy(s.begin(), s.end(), out.begin());
        return;
    }
    const double theta = (u - u0) / (u1 - u0);
    const double theta1 = 1.0 - theta;
    const double* rc = dense_.data() + 5 * dim_ * k;
    for (std::size_t i = 0; i < dim_; ++i) {
        const double r1 = rc[i], r2 = rc[dim_ + i], r3 = rc[2 * dim_ + i], r4 = rc[3 * dim_ + i],
                     r5 = rc[4 * dim_ + i];
        out[i] = r1 + theta * (r2 + theta1 * (r3 + theta * (r4 + theta1 * r5)));
    }
}

std::vector<double> Trajectory::at(double u) const {
    std::vector<double> out(dim_);
    at(u, out);
    return out;
}

double Trajectory::component(double u, std::size_t i) const {
    if (i >= dim_) throw std::out_of_range("trajectory component index");
    double buf[8];
    if (dim_ <= 8) {
        at(u, std::span<double>(buf, dim_));
        return buf[i];
    }
    return at(u)[i];
}

// Dormand-Prince 5(4) tableau with Hairer's dense-output coefficients.
class DormandPrince {
   public:
    DormandPrince(const OdeSystem& sys, Tolerances tol, IntegrateOptions opt)
        : sys_(sys), tol_(tol), opt_(opt), n_(sys.dimension) {
        if (!(tol.rtol > 0.0) || !(tol.atol > 0.0))
            throw std::invalid_argument("integrate: rtol and atol must be positive");
        if (n_ == 0 || !sys.rhs) throw std::invalid_argument("integrate: empty system");
        for (auto* v : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &ytmp_, &y1_, &err_}) v->assign(n_, 0.0);
    }

    void run(Trajectory& tr, double u_end) {
        double u = tr.nodes_.back();
        if (!(u_end > u)) throw std::invalid_argument("integrate: u_end must exceed u_start");
        std::vector<double> y(tr.states_.end() - static_cast<std::ptrdiff_t>(n_), tr.states_.end());
        check_finite(y, u, "non-finite initial state");

        eval(u, y, k1_);
        check_finite(k1_, u, "non-finite derivative");

        double h = tr.h_last_ > 0.0 ? tr.h_last_ : (opt_.initial_step > 0.0 ? opt_.initial_step
                                                                             : initial_step(u, y, u_end));
        double facold = 1e-4;
        bool last_rejected = false;
        std::size_t count = 0;

        while (u < u_end) {
            if (++count > opt_.max_steps) throw IntegrationError("too many steps", u);
            bool final_step = false;
            if (u + 1.01 * h >= u_end) {
                h = u_end - u;
                final_step = true;
            }
            if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::abs(u) || h <= 0.0)
                throw IntegrationError("step size underflow", u);

            stages(u, y, h);
            const double e = error_norm(y);

            if (!std::isfinite(e)) {
                h *= 0.1;
                last_rejected = true;
                if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::abs(u))
                    throw IntegrationError("non-finite state", u);
                continue;
            }

            const double fac11 = std::pow(e, 0.17);
            if (e <= 1.0) {
                double fac = fac11 / std::pow(facold, 0.04);
                fac = std::clamp(fac / 0.9, 0.1, 5.0);
                facold = std::max(e, 1e-4);
                double hnew = h / fac;
                if (last_rejected) hnew = std::min(hnew, h);

                const double u_new = final_step ? u_end : u + h;
                store_step(tr, u_new, y, h);
                y.swap(y1_);
                k1_.swap(k7_);
                u = u_new;
                tr.h_last_ = final_step ? std::max(tr.h_last_, hnew) : hnew;
                h = hnew;
                last_rejected = false;
            } else {
                h /= std::min(5.0, fac11 / 0.9);
                last_rejected = true;
            }
        }
    }

   private:
    void eval(double u, std::span<const double> y, std::vector<double>& out) const { sys_.rhs(u, y, out); }

    static void check_finite(std::span<const double> v, double u, const char* what) {
        for (double x : v)
            if (!std::isfinite(x)) throw IntegrationError(what, u);
    }

    double scaled_norm(std::span<const double> v, std::span<const double> y) const {
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double sk = tol_.atol + tol_.rtol * std::abs(y[i]);
            s += (v[i] / sk) * (v[i] / sk);
        }
        return std::sqrt(s / static_cast<double>(n_));
    }

    double initial_step(double u, std::span<const double> y, double u_end) {
        const double d0 = scaled_norm(y, y);
        const double d1 = scaled_norm(k1_, y);
        double h0 = (d0 < 1e-10 || d1 < 1e-10) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, u_end - u);
        for (std::size_t i = 0; i < n_; ++i) ytmp_[i] = y[i] + h0 * k1_[i];
        eval(u + h0, ytmp_, k2_);
        for (std::size_t i = 0; i < n_; ++i) err_[i] = k2_[i] - k1_[i];
        const double d2 = scaled_norm(err_, y) / h0;
        const double dm = std::max(d1, d2);
        const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
        return std::min({100.0 * h0, h1, u_end - u});
    }

    void stages(double u, std::span<const double> y, double h) {
        constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        constexpr double a21 = 1.0 / 5;
        constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                         a54 = -212.0 / 729;
        constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                         a65 = -5103.0 / 18656;
        constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                         a76 = 11.0 / 84;
        constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                         e6 = 22.0 / 525, e7 = -1.0 / 40;

        for (std::size_t i = 0; i < n_; ++i) ytmp_[i] = y[i] + h * a21 * k1_[i];
        eval(u + c2 * h, ytmp_, k2_);
        for (std::size_t i = 0; i < n_; ++i) ytmp_[i] = y[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
        eval(u + c3 * h, ytmp_, k3_);
        for (std::size_t i = 0; i < n_; ++i) ytmp_[i] = y[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
        eval(u + c4 * h, ytmp_, k4_);
        for (std::size_t i = 0; i < n_; ++i)
            ytmp_[i] = y[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
        eval(u + c5 * h, ytmp_, k5_);
        for (std::size_t i = 0; i < n_; ++i)
            ytmp_[i] = y[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] + a65 * k5_[i]);
        eval(u + h, ytmp_, k6_);
        for (std::size_t i = 0; i < n_; ++i)
            y1_[i] = y[i] + h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] + a75 * k5_[i] + a76 * k6_[i]);
        eval(u + h, y1_, k7_);
        for (std::size_t i = 0; i < n_; ++i)
            err_[i] = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] + e7 * k7_[i]);
    }

    double error_norm(std::span<const double> y) const {
        double e = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!std::isfinite(y1_[i]) || !std::isfinite(k7_[i])) return std::numeric_limits<double>::infinity();
            const double sk = tol_.atol + tol_.rtol * std::max(std::abs(y[i]), std::abs(y1_[i]));
            e = std::max(e, std::abs(err_[i]) / sk);
        }
        return e;
    }

    void store_step(Trajectory& tr, double u_new, std::span<const double> y, double h) const {
        constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                         d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                         d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
        const std::size_t base = tr.dense_.size();
        tr.dense_.resize(base + 5 * n_);
        double* rc = tr.dense_.data() + base;
        for (std::size_t i = 0; i < n_; ++i) {
            const double diff = y1_[i] - y[i];
            const double bspl = h * k1_[i] - diff;
            rc[i] = y[i];
            rc[n_ + i] = diff;
            rc[2 * n_ + i] = bspl;
            rc[3 * n_ + i] = diff - h * k7_[i] - bspl;
            rc[4 * n_ + i] =
                h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] + d6 * k6_[i] + d7 * k7_[i]);
        }
        tr.nodes_.push_back(u_new);
        tr.states_.insert(tr.states_.end(), y1_.begin(), y1_.end());
    }

    const OdeSystem& sys_;
    Tolerances tol_;
    IntegrateOptions opt_;
    std::size_t n_;
    std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, k7_, ytmp_, y1_, err_;
};

Trajectory integrate(const OdeSystem& system, double u_start, std::span<const double> y0, double u_end,
                     Tolerances tol, IntegrateOptions options) {
    if (y0.size() != system.dimension) throw std::invalid_argument("integrate: state dimension mismatch");
    Trajectory tr(system.dimension, u_start, y0);
    DormandPrince(system, tol, options).run(tr, u_end);
    return tr;
}

void extend(Trajectory& trajectory, const OdeSystem& system, double u_end, Tolerances tol,
            IntegrateOptions options) {
    if (trajectory.dimension() != system.dimension)
        throw std::invalid_argument("extend: state dimension mismatch");
    if (u_end <= trajectory.u_end()) return;
    DormandPrince(system, tol, options).run(trajectory, u_end);
}

}  // namespace ruinlab
