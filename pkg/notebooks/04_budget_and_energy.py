"""
Vocabulary budgets and training energy
======================================

A model of 42.69M parameters with hidden size 512 that spends 20% of its
weights on embeddings can afford a vocabulary of about 16.6k tokens. Holding
the rest of the network fixed and sweeping the share gives the other sizes.
"""

import numpy as np

from granul import energy, format_k, vocab_size_fixed_core, vocab_size_total

total, hidden = 42_690_000, 512
v = vocab_size_total(total, 0.2, hidden)
print("20% budget:", v, format_k(v))

core = total - v * hidden
ratios = np.round(np.arange(0.1, 0.6, 0.1), 1)
sizes = [vocab_size_fixed_core(core, float(r), hidden) for r in ratios]
for r, size in zip(ratios, sizes):
    print(f"  {r:.0%} of parameters -> {size:6d} ({format_k(size)})")

# energy at a flat 250 W per GPU
for hours in (36.3, 40, 44, 52.5, 57.75):
    print(f"2 GPUs x {hours:5.2f} h = {energy(2, hours).kwh:7.3f} kWh")

report = energy(2, 40, factor=0.5)
print(f"{report.kwh:.2f} kWh, {report.kg_co2:.2f} kg CO2eq, ${report.usd_scc:.2f} social cost")
