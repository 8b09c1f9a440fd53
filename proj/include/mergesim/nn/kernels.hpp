#pragma once
#include <algorithm>
#include <cmath>

// Dense-layer kernels for the Q-network. Two implementations with identical
// arithmetic: `serial` is the reference, `par` adds OpenMP pragmas.
// Parallelism is only ever across independent output elements — every output
// is accumulated by exactly one thread in the same fixed order as the serial
// code — so the two variants produce bit-identical results and runs are
// reproducible for any thread count. bench_kernels compares their throughput.
//
// The dot product uses four accumulators and the gradient kernels use
// stride-1 axpy updates; both fix the floating-point summation order while
// letting the compiler vectorize.

namespace mergesim::nn {

// Work sizes below this stay serial; forking threads costs more than the loop.
inline constexpr long kParallelMinWork = 1L << 19;

namespace detail {

inline double dot(const double* a, const double* b, int n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i] * b[i];
    return ((s0 + s1) + (s2 + s3)) + tail;
}

inline void axpy(double alpha, const double* x, double* y, int n) {
    for (int i = 0; i < n; ++i) y[i] += alpha * x[i];
}

} // namespace detail

namespace serial {

// Y[b,o] = bias[o] + sum_i W[o,i] * X[b,i]
inline void linear_forward(const double* W, const double* bias, const double* X, double* Y,
                           int batch, int in, int out) {
    for (int b = 0; b < batch; ++b)
        for (int o = 0; o < out; ++o)
            Y[static_cast<long>(b) * out + o] =
                bias[o] + detail::dot(W + static_cast<long>(o) * in,
                                      X + static_cast<long>(b) * in, in);
}

inline void relu_forward(const double* Z, double* A, long n) {
    for (long i = 0; i < n; ++i) A[i] = Z[i] > 0.0 ? Z[i] : 0.0;
}

// dZ[i] = dA[i] * 1{Z[i] > 0}
inline void relu_backward(const double* dA, const double* Z, double* dZ, long n) {
    for (long i = 0; i < n; ++i) dZ[i] = Z[i] > 0.0 ? dA[i] : 0.0;
}

// dW[o,i] = sum_b dY[b,o] * X[b,i]   (overwrites dW)
inline void linear_grad_weights(const double* dY, const double* X, double* dW, int batch, int in,
                                int out) {
    for (int o = 0; o < out; ++o) {
        double* dw = dW + static_cast<long>(o) * in;
        std::fill(dw, dw + in, 0.0);
        for (int b = 0; b < batch; ++b)
            detail::axpy(dY[static_cast<long>(b) * out + o], X + static_cast<long>(b) * in, dw, in);
    }
}

// db[o] = sum_b dY[b,o]   (overwrites db)
inline void linear_grad_bias(const double* dY, double* db, int batch, int out) {
    for (int o = 0; o < out; ++o) {
        double acc = 0.0;
        for (int b = 0; b < batch; ++b) acc += dY[static_cast<long>(b) * out + o];
        db[o] = acc;
    }
}

// dX[b,i] = sum_o dY[b,o] * W[o,i]   (overwrites dX)
inline void linear_grad_input(const double* W, const double* dY, double* dX, int batch, int in,
                              int out) {
    for (int b = 0; b < batch; ++b) {
        double* dx = dX + static_cast<long>(b) * in;
        std::fill(dx, dx + in, 0.0);
        for (int o = 0; o < out; ++o)
            detail::axpy(dY[static_cast<long>(b) * out + o], W + static_cast<long>(o) * in, dx, in);
    }
}

// Adam with bias correction; t is the 1-based step count.
inline void adam_step(double* param, const double* grad, double* m, double* v, long n, double lr,
                      double beta1, double beta2, double eps, long t) {
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    for (long i = 0; i < n; ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
        param[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
    }
}

} // namespace serial

namespace par {

inline void linear_forward(const double* W, const double* bias, const double* X, double* Y,
                           int batch, int in, int out) {
    if (static_cast<long>(batch) * out * in < kParallelMinWork)
        return serial::linear_forward(W, bias, X, Y, batch, in, out);
#pragma omp parallel for collapse(2) schedule(static)
    for (int b = 0; b < batch; ++b)
        for (int o = 0; o < out; ++o)
            Y[static_cast<long>(b) * out + o] =
                bias[o] + detail::dot(W + static_cast<long>(o) * in,
                                      X + static_cast<long>(b) * in, in);
}

inline void relu_forward(const double* Z, double* A, long n) {
    if (n < kParallelMinWork) return serial::relu_forward(Z, A, n);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) A[i] = Z[i] > 0.0 ? Z[i] : 0.0;
}

inline void relu_backward(const double* dA, const double* Z, double* dZ, long n) {
    if (n < kParallelMinWork) return serial::relu_backward(dA, Z, dZ, n);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) dZ[i] = Z[i] > 0.0 ? dA[i] : 0.0;
}

inline void linear_grad_weights(const double* dY, const double* X, double* dW, int batch, int in,
                                int out) {
    if (static_cast<long>(batch) * out * in < kParallelMinWork)
        return serial::linear_grad_weights(dY, X, dW, batch, in, out);
#pragma omp parallel for schedule(static)
    for (int o = 0; o < out; ++o) {
        double* dw = dW + static_cast<long>(o) * in;
        std::fill(dw, dw + in, 0.0);
        for (int b = 0; b < batch; ++b)
            detail::axpy(dY[static_cast<long>(b) * out + o], X + static_cast<long>(b) * in, dw, in);
    }
}

inline void linear_grad_bias(const double* dY, double* db, int batch, int out) {
    if (static_cast<long>(batch) * out < kParallelMinWork)
        return serial::linear_grad_bias(dY, db, batch, out);
#pragma omp parallel for schedule(static)
    for (int o = 0; o < out; ++o) {
        double acc = 0.0;
        for (int b = 0; b < batch; ++b) acc += dY[static_cast<long>(b) * out + o];
        db[o] = acc;
    }
}

inline void linear_grad_input(const double* W, const double* dY, double* dX, int batch, int in,
                              int out) {
    if (static_cast<long>(batch) * out * in < kParallelMinWork)
        return serial::linear_grad_input(W, dY, dX, batch, in, out);
#pragma omp parallel for schedule(static)
    for (int b = 0; b < batch; ++b) {
        double* dx = dX + static_cast<long>(b) * in;
        std::fill(dx, dx + in, 0.0);
        for (int o = 0; o < out; ++o)
            detail::axpy(dY[static_cast<long>(b) * out + o], W + static_cast<long>(o) * in, dx, in);
    }
}

inline void adam_step(double* param, const double* grad, double* m, double* v, long n, double lr,
                      double beta1, double beta2, double eps, long t) {
    if (n < kParallelMinWork) return serial::adam_step(param, grad, m, v, n, lr, beta1, beta2, eps, t);
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
        param[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
    }
}

} // namespace par

} // namespace mergesim::nn
