# Delivery probability and waiting delay of a prioritized relay set
#
# Members forward in priority order. The k-th receiver waits k-1 slots of
# T = 45 ms before forwarding, and if nobody receives the sender has waited
# all n slots.

from itertools import permutations

from orsim.delaymodel import (delay_sensitivity, network_pdp, optimal_priority_order,
                              relaying_delay)

T = 0.045
probs = [0.8, 0.6]
print("P_G =", network_pdp(probs))
print("DT  = %.2f ms" % (1000 * relaying_delay(probs, T)))

# The delivery probability ignores order, the delay does not. Putting the
# most reliable node first always gives the smallest waiting.

p = [0.3, 0.9, 0.55]
for perm in permutations(p):
    print(perm, "%.2f ms" % (1000 * relaying_delay(perm, T)))
print("best order:", [p[k] for k in optimal_priority_order(p)])

# Raising one member's probability by 0.01 trims the delay. Higher priorities
# matter more when the profile is sorted descending.

print("gain at 1: %.3f ms" % (1000 * delay_sensitivity(probs, 1, 0.01, T)))
print("gain at 2: %.3f ms" % (1000 * delay_sensitivity(probs, 2, 0.01, T)))

# Out of order, that no longer holds. Behind a weak first node the second
# member sees almost every packet, so improving it beats improving the first.

odd = [0.01, 0.98, 0.01]
for i in (1, 2, 3):
    print("i=%d gain %.5f T" % (i, delay_sensitivity(odd, i, 0.01, T) / T))
