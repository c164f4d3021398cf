"""
The time-indexed integer program
================================

Writes the toy instance as a CPLEX LP file and, if HiGHS is installed,
solves it.  With one capacity sample the integer optimum equals the best
permutation found by exhaustive search.
"""
import tempfile
from pathlib import Path

from rcjsu import UncertaintyScenario, brute_force_oracle, export_ip, read_instance

inst = read_instance(Path(__file__).parent.parent / "tests" / "data" / "toy3.rcj")
scen = UncertaintyScenario((10.0,), 1.0, 0, 10.0)

model = export_ip(inst, scen)
print(f"horizon {model.horizon}, {model.n_vars} binaries, rows per family {model.counts}")
print(model.text)

try:
    import highspy
except ImportError:
    print("highspy not installed; solve the text above with any MIP solver")
else:
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "toy.lp"
        path.write_text(model.text)
        h = highspy.Highs()
        h.setOptionValue("output_flag", False)
        h.readModel(str(path))
        h.run()
        print("MIP optimum:", h.getInfo().objective_function_value)
print("oracle:     ", brute_force_oracle(inst, scen)[1].mean_twt)
