# %% [markdown]
# # League announcement: three ways to tell X what happened
#
# X heard which two groups played, Y heard the two teams, Z heard the winner.
# We run the silent protocol and the two interactive orders and look at who
# pays for what.

# %%
from sensorpoll.league import LeagueConfig, MatchInstance, Team, compare_orders, run_y_first, run_z_first

cfg = LeagueConfig(groups=8, teams=4)
cmp = compare_orders(cfg)
for name, bits in cmp.per_party.items():
    print(f"{name:15s} X={bits['X']} Y={bits['Y']} Z={bits['Z']}  total={cmp.totals[name]}")

# %% [markdown]
# The two interactive orders cost different amounts, so the order in which
# informants speak matters.

# %%
print("order dependent:", cmp.order_dependent)
print("informant bits:", cmp.informant_totals)

# %% Message-by-message view of one match
match = MatchInstance(Team(1, 2), Team(5, 3), winner=Team(5, 3))
for run in (run_y_first, run_z_first):
    decoded, transcript = run(cfg, match)
    print(run.__name__, "decoded correctly:", decoded == match)
    for msg in transcript.messages:
        print(f"   {msg.sender} -> {msg.bits or '(empty)':6s} {msg.purpose}")
    print("   grouped:", transcript.grouped())
