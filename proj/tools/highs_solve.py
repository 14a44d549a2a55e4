#!/usr/bin/env python3
"""Solve an MPS file with HiGHS and print `status <s> objective <v>`.

Exit codes: 0 solved, 1 solver did not reach optimality, 2 highspy missing.
"""
import sys


def main() -> int:
    if len(sys.argv) != 2:
        print("usage: highs_solve.py MODEL.mps", file=sys.stderr)
        return 1
    try:
        import highspy
    except ImportError:
        print("highspy is not installed", file=sys.stderr)
        return 2

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    if h.readModel(sys.argv[1]) != highspy.HighsStatus.kOk:
        print(f"cannot read {sys.argv[1]}", file=sys.stderr)
        return 1
    h.run()
    status = h.modelStatusToString(h.getModelStatus())
    value = h.getInfo().objective_function_value
    print(f"status {status} objective {value!r}")
    return 0 if h.getModelStatus() == highspy.HighsModelStatus.kOptimal else 1


if __name__ == "__main__":
    sys.exit(main())
