# %% [markdown]
# # Maximum ambiguity and what it says about the league protocols
#
# For every observed value of what the recipient already knows, count how many
# values the informant could still hold. The log of the worst count is a floor
# on the bits any correct protocol must spend.

# %%
from sensorpoll.ambiguity import SupportRelation, ambiguity_set, build_league_supports, max_ambiguity

rel = SupportRelation.of({("a", 1), ("b", 1), ("a", 2)})
print(ambiguity_set(rel, 1), max_ambiguity(rel))

# %%
supports = build_league_supports(8, 4)
for name, s in supports._asdict().items():
    rep = max_ambiguity(s)
    print(f"{name:12s} |S|={len(s):4d}  max ambiguity={rep.max_ambiguity:3d}  >= {rep.lower_bound_bits} bits")

# %% [markdown]
# Compare with the bits the informants actually send (01_league_protocols.py):
# Y-first sends Z just 1 bit, the floor for the winner given both teams.
