# Simulated coordination rounds against the closed forms
#
# One round: every member hears the data with its own probability, the best
# ranked receiver forwards, and the sender retries when nobody heard it.

import numpy as np

from orsim.delaymodel import network_pdp, relaying_delay
from orsim.simcore import coordination_round

rng = np.random.default_rng(0)
probs = [0.8, 0.6, 0.4]
relay = [0, 1, 2]
perfect_acks = lambda a, b: 1.0

rounds = [coordination_round(relay, probs, perfect_acks, rng, max_retries=1000) for _ in range(50_000)]
first = np.array([r.first_try_slots for r in rounds])
tries = np.array([r.tries for r in rounds])

print("first-try wait  %.4f slots (model %.4f)" % (first.mean(), relaying_delay(probs, 1.0)))
print("tries           %.4f (model %.4f)" % (tries.mean(), 1 / network_pdp(probs)))
print("first-try hit   %.4f (model %.4f)" % ((tries == 1).mean(), network_pdp(probs)))

# If two holders share no link, the lower one never hears the ACK and forwards
# a duplicate.

no_link = lambda a, b: None
out = coordination_round([0, 1], [1.0, 1.0], no_link, rng)
print("duplicates without a link:", out.duplicates)
