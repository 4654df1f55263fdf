"""
Exhaustive sweeps with a JSON report
====================================

The harness enumerates every line or plane of central elements, decides
each quotient twice (normal-form reducer and a brute-force rank scan) and
reports counts and mismatches.  The JSON form is byte-for-byte
reproducible.
"""

from conjtype.harness import run_verification

rep = run_verification("lemma4", p=3, n=4)
print(rep.to_text())

rep = run_verification("lemma10", p=2)
print(rep.to_json())

###############################################################################
# A tiny budget gives an honest "incomplete" verdict, not a failure.
rep = run_verification("lemma7", p=5, budget=1000)
print(rep.verdict, rep.exit_code, rep.notes)
