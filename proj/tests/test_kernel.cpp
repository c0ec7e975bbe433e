#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "ncheat/kernel.hpp"

using namespace ncheat;

namespace {

constexpr double kPi = std::numbers::pi;

FieldState grid_state(const std::vector<double>& values, double t = 0.0) {
    return FieldState{t, values, BoundaryCurve::power_law(1.0, 1.0)};
}

std::vector<double> sine_mix(std::mt19937& rng, int n) {
    std::normal_distribution<double> gauss;
    std::vector<double> c(5);
    for (int m = 0; m < 5; ++m)
        c[m] = gauss(rng) / (m + 1);
    std::vector<double> u(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double y = static_cast<double>(i) / n;
        double v = 0.0;
        for (int m = 0; m < 5; ++m)
            v += c[m] * std::sin((m + 1) * kPi * y);
        u[i] = v;
    }
    return u;
}

} // namespace

TEST_CASE("kernel degeneracies hold exactly") {
    const KernelParams params{2.0, 1e-10, 64};
    CHECK(p_kernel(params, 3.0, 0.0) == 0.0);
    CHECK(q_kernel(params, 3.0, 0.0) == 0.0);
    CHECK(p_kernel(params, 3.0, 3.0) == 0.5 * 3.0 * 2.0);
    CHECK(q_kernel(params, 3.0, 3.0) == 0.5 * 3.0 * 2.0);
}

TEST_CASE("kernel values match high-precision partial sums") {
    const KernelParams params{1.0, 1e-10, 64};
    CHECK(p_kernel(params, 1.0, 0.5) == doctest::Approx(0.27418147392871331).epsilon(1e-12));
    CHECK(q_kernel(params, 1.0, 0.5) == doctest::Approx(0.22728358440399501).epsilon(1e-12));
}

TEST_CASE("series truncation is insensitive to extra terms") {
    const KernelParams tight{6.5, 1e-10, 64};
    const KernelParams capped{6.5, 1e-10, 20};
    const double full = p_kernel(tight, 2.0, 1.0);
    const double low = p_kernel(capped, 2.0, 1.0);
    CHECK(std::abs(full - low) <= 1e-9 * std::abs(full));
}

TEST_CASE("arguments outside the triangle rejected") {
    const KernelParams params{1.0, 1e-10, 64};
    CHECK_THROWS_AS(p_kernel(params, 1.0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(q_kernel(params, 1.0, -0.1), std::invalid_argument);
    CHECK_THROWS_AS((KernelParams{0.0, 1e-10, 64}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((KernelParams{1.0, 1e-3, 64}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((KernelParams{1.0, 1e-10, 5}).validate(), std::invalid_argument);
}

TEST_CASE("evaluation beyond the double exponent range raises a range error") {
    const KernelParams params{1e6, 1e-10, 64};
    CHECK_THROWS_AS(p_kernel(params, 1.0, 0.5), kernel_range_error);
}

TEST_CASE("growth bound holds on sampled triangles") {
    for (double lambda : {0.5, 1.0, 6.5, 25.0})
        for (double l : {1.0, 2.0, 5.0}) {
            const KernelBoundCheck chk = kernel_bound_check(KernelParams{lambda, 1e-10, 96}, l);
            CHECK(chk.empirical_max <= chk.bound);
            CHECK(chk.bound == doctest::Approx(std::sqrt(lambda) * std::exp(std::sqrt(lambda) * l)));
        }
    const KernelBoundCheck tiny = kernel_bound_check(KernelParams{1e-12, 1e-10, 64}, 1.0);
    CHECK(tiny.empirical_max <= 1e-11);
}

TEST_CASE("kernel PDE residuals converge at second order") {
    for (double lambda : {1.0, 6.5}) {
        const KernelParams params{lambda, 1e-12, 96};
        const KernelResidual r64 = kernel_pde_residual(params, 64);
        const KernelResidual r128 = kernel_pde_residual(params, 128);
        CHECK(std::log2(r64.p_residual / r128.p_residual) >= 1.8);
        CHECK(std::log2(r64.q_residual / r128.q_residual) >= 1.8);
        CHECK(r128.p_residual < 1e-2 * lambda * lambda);
        CHECK(r128.q_residual < 1e-2 * lambda * lambda);
    }
    CHECK_THROWS_AS(kernel_pde_residual(KernelParams{1.0, 1e-10, 64}, 8), std::invalid_argument);
}

TEST_CASE("transforms preserve zero and the left endpoint") {
    const KernelParams params{1.0, 1e-10, 64};
    const FieldState zero = grid_state(std::vector<double>(101, 0.0));
    const FieldState w = forward_transform(zero, params);
    for (double v : w.values)
        CHECK(v == 0.0);
    CHECK(inverse_transform(zero, params).values[50] == 0.0);
}

TEST_CASE("transforms collapse to the identity as lambda -> 0") {
    const KernelParams params{1e-12, 1e-10, 64};
    std::mt19937 rng(3);
    const auto u = sine_mix(rng, 100);
    const FieldState s = grid_state(u);
    const FieldState w = forward_transform(s, params);
    const FieldState b = inverse_transform(s, params);
    for (int i = 0; i <= 100; ++i) {
        CHECK(std::abs(w.values[i] - u[i]) <= 1e-10);
        CHECK(std::abs(b.values[i] - u[i]) <= 1e-10);
    }
}

TEST_CASE("round trip through both transforms is O(h^2) on smooth fields") {
    const KernelParams params{1.0, 1e-10, 64};
    std::mt19937 rng(11);
    for (int n : {100, 200}) {
        const double h = 1.0 / n;
        double worst = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            auto u = sine_mix(rng, n);
            u[0] = 0.0;
            const FieldState s = grid_state(u);
            const FieldState back = inverse_transform(forward_transform(s, params), params);
            double scale = 0.0, err = 0.0;
            for (int i = 0; i <= n; ++i) {
                scale = std::max(scale, std::abs(u[i]));
                err = std::max(err, std::abs(back.values[i] - u[i]));
            }
            worst = std::max(worst, err / scale);
        }
        CHECK(worst <= 5.0 * h * h);
    }
}

TEST_CASE("forward transform self-converges at second order") {
    const KernelParams params{1.0, 1e-10, 64};
    auto field = [](double y) { return std::sin(kPi * y) + 0.3 * std::sin(3.0 * kPi * y); };
    auto run = [&](int n) {
        std::vector<double> u(n + 1);
        for (int i = 0; i <= n; ++i)
            u[i] = field(static_cast<double>(i) / n);
        return forward_transform(grid_state(u, 1.0), params);  // l(1) = 2
    };
    const FieldState w100 = run(100), w200 = run(200), w400 = run(400);
    double d1 = 0.0, d2 = 0.0;
    for (int i = 0; i <= 100; ++i)
        d1 = std::max(d1, std::abs(w100.values[i] - w200.values[2 * i]));
    for (int i = 0; i <= 200; ++i)
        d2 = std::max(d2, std::abs(w200.values[i] - w400.values[2 * i]));
    CHECK(d1 / d2 >= 3.5);
}
