// Reads a 2xk table, prints GroMic and pseudo e-values, then continues with a second batch.

#include <cmath>
#include <cstdio>
#include <vector>

#include "gro/gro.hpp"

int main(int argc, char** argv) {
  using namespace gro;
  try {
    Table t = argc > 1 ? parse_table(argv[1]) : Table({{12, 10}, {12, 3}});
    std::vector<PriorSpec> specs(t.k(), PriorSpec::uniform());
    std::vector<long> sizes = t.sizes();

    EValueReport mic = log_e_gro_mic(t, specs);
    EValueReport pseudo = log_e_pseudo(t, specs, pseudo_null_density(specs, sizes, 10000));
    std::printf("GroMic e = %.6g (decision at 0.05: %s)\n", std::exp(mic.log_e), to_string(decide(mic.log_e, 0.05)));
    std::printf("pseudo e = %.6g (not an e-value; upper reference only)\n", std::exp(pseudo.log_e));

    // A second batch with the same design; the product stays an e-value.
    EValueReport next = log_e_gro_mic(Table({{12, 9}, {12, 4}}), specs);
    std::vector<LogValue> logs{mic.log_e, next.log_e};
    LogValue both = combine_evalues(logs);
    std::printf("combined e = %.6g (decision at 0.05: %s)\n", std::exp(both), to_string(decide(both, 0.05)));
    return 0;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
