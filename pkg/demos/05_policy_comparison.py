# Three relay-set policies on the same random network
#
# DDA picks a fully connected relay network, ExOR-lite uses every progress
# neighbor and SOAR-lite keeps neighbors of the best-progress node. The
# topology and traffic come from the same seeded streams for all three.

from orsim.expcli.config import parse_config
from orsim.simcore import run_scenario

cfg = parse_config(None, "desk")
print("%-5s %5s %10s %6s %8s" % ("pol", "seed", "delay_ms", "pdr", "dup"))
for seed in cfg.seeds:
    for policy in cfg.policies:
        row = run_scenario(cfg.scenario(policy, cfg.load_nodes, cfg.density_cbr), seed)
        print("%-5s %5d %10.1f %6.3f %8.3f" % (policy, seed, row.mean_delay_ms, row.pdr,
                                                row.duplicates_per_delivery))
