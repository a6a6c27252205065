// Benchmark of the parallel linear-algebra kernels against their serial
// reference implementations. Exits nonzero if any pair of results disagrees.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "coho/kmatrix.hpp"

using namespace coho;

static KMatrix random_matrix(const FieldPtr& F, int rows, int cols, uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> dist(0, F->q() - 1);
  KMatrix M(F, rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) M.set(r, c, static_cast<uint16_t>(dist(rng)));
  return M;
}

template <typename Fn>
static double time_ms(Fn&& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 384;
  bool ok = true;
  for (const char* spec : {"2", "2^2:1,1,1", "3"}) {
    FieldPtr F = Field::parse(spec);
    KMatrix A = random_matrix(F, n, n, 12345);
    KMatrix B = random_matrix(F, n, n, 67890);

    KMatrix P, S;
    double tp = time_ms([&] { P = A.mul(B); });
    double ts = time_ms([&] { S = A.mul_serial(B); });
    bool mul_ok = P == S;

    KMatrix R1 = A, R2 = A;
    double rp = time_ms([&] { R1.rref(); });
    double rs = time_ms([&] { R2.rref_serial(); });
    bool rref_ok = R1 == R2;

    std::printf("GF(%d^%d) n=%d  mul: parallel %8.2f ms, serial %8.2f ms, %s\n", F->p(), F->m(),
                n, tp, ts, mul_ok ? "identical" : "MISMATCH");
    std::printf("GF(%d^%d) n=%d rref: parallel %8.2f ms, serial %8.2f ms, %s\n", F->p(), F->m(),
                n, rp, rs, rref_ok ? "identical" : "MISMATCH");
    ok = ok && mul_ok && rref_ok;
  }
  return ok ? 0 : 1;
}
