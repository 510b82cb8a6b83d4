"""Reproduce the worked examples bundled as fixtures, printing each result.

    python3 scripts/paper_examples.py
"""
import shlex

from causex.cli import run

COMMANDS = [
    "eval arson_disjunctive --context 'U=u11' --formula '[ML1<-0](FB=1)'",
    "eval arson_conjunctive --context 'U=u11' --formula '[ML1<-0](FB=0)'",
    "cause arson_disjunctive --context 'U=u11' --phi 'FB=1' --enumerate",
    "suffcause arson_conjunctive --context 'U=u11' --phi 'FB=1' --candidate 'ML1=1 & ML2=1'",
    "cause april_showers --context 'UA=1, UE=11' --phi 'F=2' --enumerate",
    "cause april_showers --context 'UA=1, UE=11' --phi 'F=1 | F=2' --enumerate",
    "explain april_showers --k k_april_fire --phi 'F=1 | F=2'",
    "explain april_showers --k k_april_june --phi 'F=2'",
    "explain arson_disjunctive --k k_arson_disjunctive --phi 'FB=1'",
    "explain arson_other_causes --k k_arson_other --phi 'FB=1'",
    "explain arson_conjunctive --k k_arson_conjunctive --phi 'FB=1'",
    "explain victoria --k k_victoria --phi 'Tan=1'",
    "partial victoria --k k_victoria --phi 'Tan=1' --candidate 'Canaries=1'",
    "explain tv --k k_tv --phi 'P=0'",
    "goodness tv --k k_tv --phi 'P=0' --candidate 'T=0'",
    "explain tv_named --phi 'P=0'",
    "general-explain s_paresis --phi 'P=1' --psi-set psi_paresis",
    "general-explain s_paresis_known --phi 'P=1' --psi-set psi_paresis",
    "power arson_oxygen --phi 'FB=1' --candidate 'O=1'",
    "power arson_oxygen --phi 'FB=1' --candidate 'ML1=1'",
    "power barometer --phi 'R=1' --candidate 'B=1'",
    "power barometer --phi 'R=1' --candidate 'B=1' --measure gardenfors",
]


def main():
    status = 0
    for line in COMMANDS:
        print(f"$ causex {line}")
        status |= run(shlex.split(line))
        print()
    return status


if __name__ == "__main__":
    raise SystemExit(main())
