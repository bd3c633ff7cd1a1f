"""Regenerate the boundary figure with the default configuration and print a summary.

    python3 scripts/run_figure1.py [out_dir] [workers]
"""
import sys
import time

from udwent import cli


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "out"
    workers = sys.argv[2] if len(sys.argv) > 2 else "1"
    t0 = time.perf_counter()
    code = cli.main(["figure1", "--out", out, "--workers", workers])
    print(f"exit {code} after {time.perf_counter() - t0:.0f} s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
