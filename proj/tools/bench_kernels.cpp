// Compares the OpenMP tree-construction kernel against the serial reference
// and reports query throughput, across the generator families.
#include <omp.h>

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "omv/engine_static.hpp"
#include "omv/rng.hpp"
#include "omv/synthgen.hpp"
#include "omv/tree.hpp"

int main(int argc, char** argv) {
  std::size_t max_n = 1024;
  if (argc > 1) max_n = std::strtoull(argv[1], nullptr, 10);

  std::printf("threads %d\n", omv::effective_threads());
  std::printf("%-12s %6s %12s %12s %8s %12s %12s\n", "family", "n", "serial_s", "parallel_s",
              "speedup", "weight", "query_us");

  for (omv::Family fam : {omv::Family::Interval, omv::Family::Random}) {
    for (std::size_t n = 128; n <= max_n; n *= 2) {
      omv::SynthSpec spec = omv::make_spec(fam, n, n, 0, 12345);
      omv::BitMatrix m = omv::generate(spec);
      m.sync_columns();

      double t0 = omp_get_wtime();
      omv::DeltaTree serial = omv::build_mst_serial(m);
      double t_serial = omp_get_wtime() - t0;

      t0 = omp_get_wtime();
      omv::DeltaTree parallel = omv::build_mst(m);
      double t_parallel = omp_get_wtime() - t0;

      if (serial.weight != parallel.weight || serial.parent != parallel.parent) {
        std::fprintf(stderr, "kernel mismatch at %s n=%zu\n",
                     omv::family_name(fam).c_str(), n);
        return 1;
      }

      omv::StaticOmv engine = omv::StaticOmv::preprocess(std::move(m));
      omv::rng::Stream qs(99, "bench_kernels");
      omv::RealVector v(n);
      for (double& x : v) x = static_cast<double>(qs.next_int(-100, 100));
      const int q_reps = 50;
      t0 = omp_get_wtime();
      for (int r = 0; r < q_reps; ++r) engine.mv(v);
      double q_us = (omp_get_wtime() - t0) / q_reps * 1e6;

      std::printf("%-12s %6zu %12.4f %12.4f %8.2f %12zu %12.1f\n",
                  omv::family_name(fam).c_str(), n, t_serial, t_parallel,
                  t_serial / std::max(t_parallel, 1e-9), parallel.weight, q_us);
    }
  }
  return 0;
}
