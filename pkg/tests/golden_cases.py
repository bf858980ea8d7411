"""CLI invocations whose output is pinned under tests/golden/."""

# per bundled spec: atom box, class-table box/probe, union range, element
SPECS = {
    "ns23": dict(box=10, cbox=10, probe=10, k="1..12", element="10"),
    "ns25": dict(box=10, cbox=8, probe=8, k="1..12", element="10"),
    "ns37": dict(box=10, cbox=14, probe=14, k="1..12", element="10"),
    "blockZ2": dict(box=2, cbox=2, probe=2, k="1..8", element="2,2"),
    "blockZ3": dict(box=3, cbox=3, probe=3, k="1..12", element="3,3"),
    "blockZ4": dict(box=4, cbox=3, probe=3, k="1..6", element="2,2,2"),
    "blockZ5": dict(box=5, cbox=4, probe=4, k="1..4", element="1,1,1,1"),
    "blockZ6": dict(box=6, cbox=2, probe=2, k="1..3", element="1,1,0,1,1"),
    "blockZ7": dict(box=7, cbox=1, probe=2, k="1..2", element="1,0,0,0,0,1"),
    "pq-pattern": dict(box=5, cbox=4, probe=4, k="1..6", element="3,3"),
    "single-gen-pq": dict(box=5, cbox=4, probe=4, k="1..6", element="3,3"),
    "sym-pattern": dict(box=6, cbox=6, probe=6, k="1..8", element="4,3"),
}


def cases():
    out = []
    for name, p in SPECS.items():
        box = ["--box", str(p["box"])]
        inp = ["--input", name]
        out += [
            (f"{name}-atoms", ["atoms"] + inp + box),
            (f"{name}-factorize", ["factorize"] + inp + box + ["--element", p["element"]]),
            (f"{name}-lengths", ["lengths"] + inp + box + ["--element", p["element"]]),
            (f"{name}-delta", ["delta"] + inp + box + ["--k", p["k"]]),
            (f"{name}-elasticity", ["elasticity"] + inp + box),
            (f"{name}-unions", ["unions"] + inp + box + ["--k", p["k"]]),
            (f"{name}-class-table", ["class-table"] + inp
             + ["--box", str(p["cbox"]), "--probe", str(p["probe"])]),
            (f"{name}-essential", ["essential"] + inp + box),
            (f"{name}-transfer", ["transfer"] + inp
             + ["--box", str(p["cbox"]), "--probe", str(p["probe"])]),
            (f"{name}-report", ["report"] + inp + box + ["--k", p["k"]]),
        ]
    out += [
        ("aap-3578", ["aap", "--set", "3,5,7,8", "--d", "1"]),
        ("aap-024", ["aap", "--set", "0,2,4", "--d", "2"]),
        ("aap-7", ["aap", "--set", "7"]),
        ("blockZ3-report-csv", ["report", "--input", "blockZ3", "--k", "5..30",
                                "--format", "csv"]),
        ("blockZ3-report-json", ["report", "--input", "blockZ3", "--k", "5..12",
                                 "--format", "json"]),
        ("ns23-elasticity-json", ["elasticity", "--input", "ns23", "--format", "json"]),
        ("ns23-class-table-csv", ["class-table", "--input", "ns23", "--box", "10",
                                  "--probe", "10", "--format", "csv"]),
        ("blockZ4-unions-budget", ["unions", "--input", "blockZ4", "--box", "4",
                                   "--k", "1..20", "--budget", "500"]),
    ]
    return out


# commands whose work is spread over processes when --workers > 1
PARALLEL = {"unions", "delta", "report"}
