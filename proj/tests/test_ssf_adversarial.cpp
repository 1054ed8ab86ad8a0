#include <gtest/gtest.h>

#include "qldpc/graph.hpp"
#include "qldpc/hgp.hpp"
#include "qldpc/sim.hpp"
#include "qldpc/ssf.hpp"
#include "ssf_reference.hpp"

using namespace qldpc;

// Every error of weight <= 2 on the (5,6) n = 12, m = 10 product must be
// corrected up to stabilizer.
TEST(SmallSetFlipAdversarial, AllWeightTwoErrorsCorrected) {
  const auto g = generate_configuration_model(12, 10, 5, 6, 1);
  const auto code = hypergraph_product(g, g);
  const auto cats = build_catalogs(code);
  TrialRunner runner(code, cats);
  const auto n = static_cast<Index>(code.n_qubits());
  std::size_t failures = 0, checked = 0;
  bool reference_checked = false;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const std::vector<Index> e{i, j};
      const auto out = runner.evaluate(e, e);
      checked += 2;
      failures += out.x_fail + out.z_fail;
      if (out.z_fail && !reference_checked) {
        // The failure is the pseudocode's own behaviour, not an optimization artifact.
        BitVector v(n);
        v.set(i);
        v.set(j);
        const auto ref = test::reference_small_set_flip(code, Sector::kZ, mat_vec_mul(code.hx, v));
        EXPECT_TRUE(!ref.converged || !in_row_space(code.hz, v ^ ref.estimate));
        reference_checked = true;
      }
    }
  }
  RecordProperty("weight_two_errors", static_cast<int>(checked));
  RecordProperty("weight_two_failures", static_cast<int>(failures));
  EXPECT_EQ(failures, 0u) << failures << " of " << checked << " weight-2 errors are not corrected";
}
