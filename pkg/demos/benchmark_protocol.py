"""The two evaluation procedures, end to end.

Procedure 1 repeats a stratified 70/30 split, trains every method on
the same training side, and compares test AUC distributions against
the reference with a rank-sum test ('*' worse, '-' indistinguishable,
'+' better, at 0.05).  Procedure 2 instead searches each method's
parameter grid by cross validation and ranks the best results.
"""

import numpy as np

from lcckit import (BenchmarkConfig, gen_gaussian_pair, run_benchmark,
                    summary_table)

data = gen_gaussian_pair((0, 0), np.eye(2), (1.5, 1.0),
                         [[1.2, 0.4], [0.4, 0.9]], 100, seed=3)

config = BenchmarkConfig(data=data, methods=("lcc", "fqcc", "lda", "svm"),
                         runs=20, seed=3)
print("procedure 1: 20 repeated splits, default parameters\n")
print(summary_table(run_benchmark(config)))

config = BenchmarkConfig(data=data, methods=("lcc", "lda", "svm"),
                         procedure=2, folds=5, seed=3)
print("procedure 2: grid search by 5-fold cross validation\n")
print(summary_table(run_benchmark(config)))
