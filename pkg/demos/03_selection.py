# Scoring candidate relay networks
#
# Every relay network gets an ETX-inflated delay DT* and an ETX-discounted
# utility U*. Raw values live on different scales, so each metric is turned
# into ranks (best gets the highest rank) and the ranks are weighted by how
# much that metric varies across the candidates.

from orsim.expcli.explain import explain_selection
from orsim.expcli.selftest import fixture_path
from orsim.selector import (SelectionWeights, relative_variance, resolution_ratio,
                            score_from_ranks)

delay_like = (29, 45, 63)
utility_like = (0.27, 0.68, 0.49)
v1, v2 = relative_variance(delay_like), relative_variance(utility_like)
print("relative variances: %.4f %.4f, ratio %.3f" % (v1, v2, resolution_ratio(v1, v2)))

# With ranks (1,2,3) for the first metric and (1,3,2) for the second the
# middle network wins.

scores = score_from_ranks(SelectionWeights(v1, v2, resolution_ratio(v1, v2)), (1, 2, 3), (1, 3, 2))
print("scores:", [round(s, 4) for s in scores])

# The same pipeline on the fixture, with residual energy as the utility.

print(explain_selection(fixture_path(), 0, 9, utility="energy"))
