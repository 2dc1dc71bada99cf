// Bounds, an exact strategy and a week of inspections for the bundled example.
//
//   ./quickstart [instance.json] [r]

#include <cstdio>
#include <string>

#include "netmon/bounds.hpp"
#include "netmon/column_generation.hpp"
#include "netmon/io.hpp"
#include "netmon/report.hpp"

int main(int argc, char** argv) {
  using namespace netmon;
  const std::string path = argc > 1 ? argv[1] : NETMON_SAMPLES_DIR "/ex1.json";
  const auto inst = load_instance(path);
  const int r = argc > 2 ? std::stoi(argv[2]) : inst.budget();

  const auto approx = solve_approx(inst, r);
  std::printf("%zu locations, %zu components, r = %d\n", inst.num_locations(),
              inst.num_components(), r);
  std::printf("lower bound %.6f, achieved %.6f, upper bound %.6f\n", approx.lower,
              approx.achieved, approx.upper);

  const auto cg = solve_cg(inst, r);
  std::printf("optimal value %.6f (%s after %zu pricing rounds)\n", cg.value,
              to_string(cg.termination), cg.iterations);
  for (const auto& a : cg.strategy.atoms()) {
    std::printf("  %.4f  {", a.probability);
    for (auto x : a.placement.locations()) std::printf(" %s", inst.location_id(x).c_str());
    std::printf(" }\n");
  }

  const auto week = sample_schedule(cg.strategy, 7, 42, ScheduleMode::iid);
  for (std::size_t d = 0; d < week.size(); ++d) {
    std::printf("day %zu:", d + 1);
    for (auto x : week[d].locations()) std::printf(" %s", inst.location_id(x).c_str());
    std::printf("\n");
  }
}
