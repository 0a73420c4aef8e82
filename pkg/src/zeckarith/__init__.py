"""Arbitrary-precision arithmetic for integers in Zeckendorf representation.

Numbers are digit sequences over the Fibonacci base F(2)=1, F(3)=2, ...,
most-significant-first.  The package provides the three-pass window
adder, sign-magnitude subtraction, conversions to and from binary,
derived multiplication / division / square root, a transducer engine
executing the passes by sequential scan or parallel-prefix composition,
and a self-delimiting Fibonacci-code codec.
"""

from .accel import backend_name, jit_enabled, use_jit
from .adder import (
    PassTrace,
    add,
    add_traced,
    digitwise_sum,
    stage1_eliminate,
    stage2_left_to_right,
    stage2_right_to_left,
)
from .arith import divrem, mul_binary, mul_fenwick, sqrt_rem
from .automaton import (
    CostReport,
    Transducer,
    compile_pass,
    cost_report,
    prefix,
    run_parallel_prefix,
    run_scan,
    scan,
    transduce,
)
from .convert import (
    binary_to_zeck,
    bits_to_int,
    bits_to_string,
    int_to_bits,
    parse_bits,
    pow2_zeck,
    zeck_to_binary,
)
from .core import (
    ContractError,
    InvariantError,
    fib,
    greedy_zeckendorf,
    is_canonical,
    parse_digits,
    parse_zeck,
    random_canonical,
    value,
    zeck_to_string,
)
from .fibcodec import CodeStream, CorruptStreamError, decode_stream, encode_stream
from .signed import (
    SignedZeck,
    add_signed,
    detect_and_orient,
    digitwise_diff,
    parse_signed,
    preliminary_pass,
    subtract,
)

__version__ = "0.1.0"

__all__ = [
    "ContractError",
    "InvariantError",
    "CodeStream",
    "CorruptStreamError",
    "CostReport",
    "PassTrace",
    "SignedZeck",
    "Transducer",
    "add",
    "add_signed",
    "add_traced",
    "backend_name",
    "binary_to_zeck",
    "bits_to_int",
    "bits_to_string",
    "compile_pass",
    "cost_report",
    "decode_stream",
    "detect_and_orient",
    "digitwise_diff",
    "digitwise_sum",
    "divrem",
    "encode_stream",
    "fib",
    "greedy_zeckendorf",
    "int_to_bits",
    "is_canonical",
    "jit_enabled",
    "mul_binary",
    "mul_fenwick",
    "parse_bits",
    "parse_digits",
    "parse_signed",
    "parse_zeck",
    "pow2_zeck",
    "prefix",
    "preliminary_pass",
    "random_canonical",
    "run_parallel_prefix",
    "run_scan",
    "scan",
    "sqrt_rem",
    "stage1_eliminate",
    "stage2_left_to_right",
    "stage2_right_to_left",
    "subtract",
    "transduce",
    "use_jit",
    "value",
    "zeck_to_binary",
    "zeck_to_string",
]
