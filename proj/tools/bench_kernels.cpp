// Compares the serial reference kernels against the OpenMP variants on the
// Q-network's layer shapes and checks that both produce identical bits.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "mergesim/nn/kernels.hpp"
#include "mergesim/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace mergesim;

namespace {

double checksum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

template <typename F>
double time_ms(F&& fn, int reps) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

struct Case {
    int batch, in, out;
};

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP: %d thread(s)\n", omp_get_max_threads());
#else
    std::printf("OpenMP: disabled at build time (par == serial)\n");
#endif

    const Case cases[] = {{32, 29, 512}, {32, 512, 512}, {32, 512, 5}, {256, 512, 512}};
    const int reps = 50;
    Rng rng(42);

    std::printf("%-22s %10s %10s %8s %9s\n", "kernel", "serial ms", "omp ms", "speedup", "bits");
    for (const Case& c : cases) {
        std::vector<double> W(static_cast<std::size_t>(c.out) * c.in), b(c.out),
            X(static_cast<std::size_t>(c.batch) * c.in),
            dY(static_cast<std::size_t>(c.batch) * c.out);
        for (double& v : W) v = rng.uniform(-1, 1);
        for (double& v : b) v = rng.uniform(-1, 1);
        for (double& v : X) v = rng.uniform(-1, 1);
        for (double& v : dY) v = rng.uniform(-1, 1);

        std::vector<double> Y1(static_cast<std::size_t>(c.batch) * c.out), Y2 = Y1;
        const double t_fwd_s = time_ms(
            [&] { nn::serial::linear_forward(W.data(), b.data(), X.data(), Y1.data(), c.batch, c.in, c.out); },
            reps);
        const double t_fwd_p = time_ms(
            [&] { nn::par::linear_forward(W.data(), b.data(), X.data(), Y2.data(), c.batch, c.in, c.out); },
            reps);
        std::printf("forward   %4dx%4dx%3d %10.3f %10.3f %8.2fx %9s\n", c.batch, c.in, c.out,
                    t_fwd_s, t_fwd_p, t_fwd_s / t_fwd_p, Y1 == Y2 ? "equal" : "DIFFER");

        std::vector<double> dW1(W.size()), dW2(W.size());
        const double t_gw_s = time_ms(
            [&] { nn::serial::linear_grad_weights(dY.data(), X.data(), dW1.data(), c.batch, c.in, c.out); },
            reps);
        const double t_gw_p = time_ms(
            [&] { nn::par::linear_grad_weights(dY.data(), X.data(), dW2.data(), c.batch, c.in, c.out); },
            reps);
        std::printf("grad_w    %4dx%4dx%3d %10.3f %10.3f %8.2fx %9s\n", c.batch, c.in, c.out,
                    t_gw_s, t_gw_p, t_gw_s / t_gw_p, dW1 == dW2 ? "equal" : "DIFFER");

        std::vector<double> dX1(X.size()), dX2(X.size());
        const double t_gi_s = time_ms(
            [&] { nn::serial::linear_grad_input(W.data(), dY.data(), dX1.data(), c.batch, c.in, c.out); },
            reps);
        const double t_gi_p = time_ms(
            [&] { nn::par::linear_grad_input(W.data(), dY.data(), dX2.data(), c.batch, c.in, c.out); },
            reps);
        std::printf("grad_x    %4dx%4dx%3d %10.3f %10.3f %8.2fx %9s\n", c.batch, c.in, c.out,
                    t_gi_s, t_gi_p, t_gi_s / t_gi_p, dX1 == dX2 ? "equal" : "DIFFER");

        // keep the optimizer honest too
        std::vector<double> p1 = W, p2 = W, m1(W.size()), v1(W.size()), m2(W.size()), v2(W.size());
        const double t_ad_s = time_ms(
            [&] { nn::serial::adam_step(p1.data(), dW1.data(), m1.data(), v1.data(),
                                        static_cast<long>(p1.size()), 5e-4, 0.9, 0.999, 1e-8, 1); },
            reps);
        const double t_ad_p = time_ms(
            [&] { nn::par::adam_step(p2.data(), dW2.data(), m2.data(), v2.data(),
                                     static_cast<long>(p2.size()), 5e-4, 0.9, 0.999, 1e-8, 1); },
            reps);
        std::printf("adam      %4dx%4dx%3d %10.3f %10.3f %8.2fx %9s\n\n", c.batch, c.in, c.out,
                    t_ad_s, t_ad_p, t_ad_s / t_ad_p,
                    checksum(p1) == checksum(p2) && p1 == p2 ? "equal" : "DIFFER");
    }
    return 0;
}
