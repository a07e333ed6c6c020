"""A look inside the linear program the trainer solves.

First a tiny LP by hand, then the program assembled from four labeled
points: one row per training instance plus one row separating the
projected centers, coefficient variables boxed to [-1, 1], slack
variables bounded below.
"""

import numpy as np

from lcckit import (Dataset, LpProblem, assemble_lcc_lp, format_problem,
                    solve, train_lcc)

# minimize -x - 2y subject to x + y <= 4, x <= 3, 0 <= x,y <= 10
toy = LpProblem(c=[-1.0, -2.0],
                A=[[1.0, 1.0], [1.0, 0.0]],
                relations=("<=", "<="),
                b=[4.0, 3.0],
                lower=[0.0, 0.0],
                upper=[10.0, 10.0])
sol = solve(toy)
print(f"toy LP: status {sol.status}, x = {sol.x}, "
      f"objective {sol.objective_value}, {sol.iterations} pivots")

# four 1-D points, two per class
train = Dataset([[0.0], [1.0], [4.0], [5.0]], [-1, -1, 1, 1])
problem = assemble_lcc_lp(train, lam=2.0, sigma=-0.01)
print(f"\nassembled program: {problem.num_rows} rows, "
      f"{problem.num_vars} variables")
print(format_problem(problem))

model = train_lcc(train)
print(f"beta {model.beta}, centers {model.c_neg_hat} / {model.c_pos_hat}, "
      f"threshold {model.l_hat}")
print(f"slacks {model.epsilons}")
