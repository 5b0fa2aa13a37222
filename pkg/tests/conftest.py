import os

# pin BLAS threads before numpy initialises; the suite measures single-core behaviour
for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
    os.environ.setdefault(var, "1")
