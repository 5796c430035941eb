#include <benchmark/benchmark.h>

// Own main: the distro libbenchmark_main archive is LTO-only bytecode.
BENCHMARK_MAIN();
