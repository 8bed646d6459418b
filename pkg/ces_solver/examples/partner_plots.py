"Plot data and figures for the partner potentials and their landmarks."
#%%
import math

import numpy as np
import pandas as pd

from ces_solver import Composer
from ces_solver.potentials import (
    PotentialSpec,
    Sign,
    hulthen,
    landmarks,
    near_zero_asymptote,
    potential,
    superpotential,
)


def get_xs(x_min, x_max, points):
    return np.linspace(x_min, x_max, points)


def get_table(xs, m):
    return pd.DataFrame(
        dict(
            x=xs,
            W=[superpotential(x, m) for x in xs],
            V_plus=[potential(x, PotentialSpec(m, Sign.PLUS)) for x in xs],
            V_minus=[potential(x, PotentialSpec(m, Sign.MINUS)) for x in xs],
            hulthen=[hulthen(x, m * m) for x in xs],
            asymptote_plus=[near_zero_asymptote(x, PotentialSpec(m, Sign.PLUS)) for x in xs],
        )
    )


def get_marks(m):
    return landmarks(m)


def get_potential_figure(table, marks, m):
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots()
    ax.plot(table.x, table.V_plus, label="$V_+$")
    ax.plot(table.x, table.V_minus, label="$V_-$")
    ax.plot(table.x, table.hulthen, "--", label="Hulthén, $Q = m^2$")
    for x in marks.x_zero_crossings or ():
        ax.axvline(x, color="grey", lw=0.5)
    for x in marks.x_critical_points or ():
        ax.axvline(x, color="grey", lw=0.5, ls=":")
    ax.set_ylim(-2 * m * m, 4 * m * m)
    ax.set_xlabel("$x$")
    ax.set_title(f"m = {m}")
    ax.legend()
    return fig


def get_near_zero_figure(table):
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots()
    ax.loglog(table.x, table.V_plus, label="$V_+$")
    ax.loglog(table.x, table.asymptote_plus, "--", label="$m^2/x + m/(2x^{3/2})$")
    ax.set_xlabel("$x$")
    ax.legend()
    return fig


f = (
    Composer()
    .update_without_prefix(
        "get_", get_xs, get_table, get_marks, get_potential_figure, get_near_zero_figure
    )
    .update_parameters(m=2.0, x_min=0.05, x_max=math.log(80.0), points=400)
)

if __name__ == "__main__":
    # %%
    f.potential_figure()

    # %%
    f.near_zero_figure()
