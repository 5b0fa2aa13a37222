from .functional import categorical_entropy, gumbel_softmax, one_hot, sample_categorical
from .nn import (
    Linear,
    Mlp,
    clone_structure,
    copy_params,
    load_params,
    parameter_count,
    restore_params,
    save_params,
)
from .optim import Adam
from .tensor import (
    Tensor,
    add,
    clip,
    concat,
    div,
    elu,
    exp,
    gather,
    log,
    log_softmax,
    matmul,
    maximum,
    minimum,
    mse,
    mul,
    relu,
    reshape,
    softmax,
    square,
    sub,
    tabs,
    tanh,
    tmean,
    tsum,
)

__all__ = [
    "Adam",
    "Linear",
    "Mlp",
    "Tensor",
    "add",
    "categorical_entropy",
    "clip",
    "clone_structure",
    "concat",
    "copy_params",
    "div",
    "elu",
    "exp",
    "gather",
    "gumbel_softmax",
    "load_params",
    "log",
    "log_softmax",
    "matmul",
    "maximum",
    "minimum",
    "mse",
    "mul",
    "one_hot",
    "parameter_count",
    "relu",
    "reshape",
    "restore_params",
    "sample_categorical",
    "save_params",
    "softmax",
    "square",
    "sub",
    "tabs",
    "tanh",
    "tmean",
    "tsum",
]
