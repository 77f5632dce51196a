# Driving the verification harness from Python.
#
# Every subcommand emits one JSON (or CSV) report and exits 0 when the
# checked invariant holds, 1 when it fails, 2 on a bad configuration.
# The same main() the console script wraps is callable in process.

import json
import subprocess
import sys

from flipchain.cli import main

print("== axioms ==")
code = main(["axioms", "--n", "3"])
print("exit", code)

print()
print("== haar, exact rational lambda ==")
code = main(["haar", "--lambda", "3/10", "--depth", "5"])
print("exit", code)

print()
print("== modular spectrum, degenerate point ==")
code = main(["spectrum", "--lambda", "0.5"])
print("exit", code)

print()
print("== partition function, both routes ==")
code = main(["ising-partition", "--J", "1.0", "--n", "6"])
print("exit", code)

print()
print("== a config error exits 2 ==")
# the matrix bridge needs lambda <= 1/2; the product measure itself is fine
code = main(["glimm", "--lambda", "0.7"])
print("exit", code)

print()
print("== the console script does the same ==")
out = subprocess.run(
    [sys.executable, "-m", "flipchain.cli", "trace", "--lambda", "0.5"],
    capture_output=True, text=True,
)
rep = json.loads(out.stdout)
print("trace passed:", rep["passed"], "exit", out.returncode)
