# %% [markdown]
# # Effective correlation length against block size
#
# With eps_1 = 1e-3 and d = 1e-10, sweep N from 1e6 to 1e12 for several
# decay rates. Larger N needs a longer l_e; faster decay (larger C) needs a
# shorter one. Same data as ``pulsecorr fig2``.

# %%
from pulsecorr import ExponentialModel, fig2_curve
from pulsecorr.budget_planner import log_spaced_grid

grid = log_spaced_grid(1e6, 1e12, 10)
curves = {C: fig2_curve(ExponentialModel(1e-3, C), 1e-10, grid) for C in (0.1, 0.2, 0.5, 1.0, 2.0)}

for C, curve in curves.items():
    print(f"C={C:<4} l_e from {curve.l_e[0]} (N=1e6) to {curve.l_e[-1]} (N=1e12)")

# %% [markdown]
# Plot on a log-x axis if matplotlib is around.

# %%
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for C, curve in curves.items():
        ax.step(curve.N, curve.l_e, where="post", label=f"C = {C}")
    ax.set_xscale("log")
    ax.set_xlabel("number of emitted signals N")
    ax.set_ylabel("effective correlation length $l_e$")
    ax.legend()
    fig.tight_layout()
    fig.savefig("effective_length.png", dpi=150)
    print("wrote effective_length.png")
