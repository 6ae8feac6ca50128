"""Write the bundled corpora under data/corpus.

Every record is typed in by hand from published tables; running this script is the
only way the JSON files are produced, so edits belong here.
"""
import json
import pathlib

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "corpus"
P0 = ["1/2", "1/2", "1/2"]
P1 = ["1/2", "-1/2", "3/2"]


def series(rid, term, start, value, source, constant="pi"):
    return {"id": rid, "constant": constant, "kind": "series", "payload": {"term": term},
            "start_index": start, "declared_value": value, "source": source}


def pcf(rid, a, b, value=None, source="", constant="pi"):
    rec = {"id": rid, "constant": constant, "kind": "pcf", "payload": {"a": a, "b": b},
           "start_index": 1, "source": source}
    if value is not None:
        rec["declared_value"] = value
    return rec


def cmf_node(rid, direction, start):
    return {"id": rid, "cmf": "pi", "direction": direction, "start": start}


TABLE1 = [
    series("t1-1", "n!/prod(k, 1, n, 2k+1)", 0, "pi/2", "arXiv:1806.03346"),
    series("t1-2", "2^n/(n*binom(2n, n))", 1, "pi/2", "arXiv:2010.05610"),
    series("t1-3", "(-1)^n/(2n+1)", 0, "pi/4", "arXiv:2404.15210"),
    series("t1-4", "(-1)^(n+1)/(n(n+1)(2n+1))", 1, "pi-3", "arXiv:2206.07174"),
    series("t1-5", "4^n*(12n-5)/((2n-1)*binom(4n, 2n))", 1, "3*pi/2+2", "arXiv:2204.08275"),
]

# Clustered formulas, grouped by the trajectory that generates them.
UNIFIED = [
    pcf("u01", "2n+5", "n(n+4)", "8/(3*pi-8)"),
    pcf("u02", "2n+1", "n^2", "4/pi", "Gauss"),
    pcf("u03", "2n+3", "n(n+2)", "4/(pi-2)"),
    pcf("u04", "-2(4n+3)(6n^2+9n+2)", "-n^2(2n+1)^2(4n-3)(4n+5)", "10/(pi-4)"),
    series("u05", "(-4)^n*(7n-1)*binom(2n, n)/(n(2n-1)*binom(3n, n)*binom(6n, 3n))", 1, "-pi/4", ""),
    series("u06", "(-2)^n*(6n-1)/(n(2n-1)*binom(4n, 2n))", 1, "pi/2", ""),
    series("u07", "(-2)^n*(30n-7)/binom(4n, 2n)", 0, "-32/3-pi/2", ""),
    series("u08", "(-2)^n*n*(126n+29)/binom(4n, 2n)", 1, "50/3+11*pi/2", ""),
    pcf("u09", "3n+5", "-n(2n-1)", "48/(105*pi-320)"),
    pcf("u10", "3(n+3)", "-(n+3)(2n-1)", "(32-15*pi)/(30*pi-96)"),
    pcf("u11", "3n+4", "-n(2n-1)", "12/(15*pi-44)"),
    pcf("u12", "3n+7", "-(n+2)(2n-1)", "(32-6*pi)/(21*pi-64)"),
    pcf("u13", "3n+5", "-(n+1)(2n-1)", "(4-3*pi)/(6*pi-20)"),
    pcf("u14", "3n+5", "-n(2n+1)", "-4/(15*pi-48)"),
    pcf("u15", "3n+7", "-(n+3)(2n-1)", "3+9*pi/8"),
    pcf("u16", "3n+8", "-(n+3)(2n-1)", "-9*pi/(9*pi-32)"),
    pcf("u17", "3(n+1)", "-n(2n-1)", "4/(3*pi-8)"),
    pcf("u18", "3(n+2)", "-(n+2)(2n-1)", "8/(3*pi-8)"),
    pcf("u19", "3n+4", "-n(2n+1)", "-2/(3*pi-10)"),
    pcf("u20", "3n+4", "-(n+1)(2n-1)", "-pi/(pi-4)"),
    series("u21a", "n!/prod(k, 1, n, 2k+1)", 0, "pi/2", ""),
    series("u21b", "2^(n+1)/((2n+1)*binom(2n, n))", 0, "pi", ""),
    series("u21c", "2^n/(n*binom(2n, n))", 1, "pi/2", ""),
    pcf("u22", "3n+5", "-(n+2)(2n-1)", "(2*pi+8)/pi"),
    pcf("u23", "3n+5", "-n(2n+3)", "6/(3*pi-8)"),
    pcf("u24", "3(n+1)", "-n(2n+1)", "-2/(pi-4)"),
    pcf("u25", "3(n+1)", "-(n+1)(2n-1)", "1+pi/2"),
    pcf("u26", "3n+1", "-n(2n-1)", "2/pi"),
    pcf("u27", "3(n+2)", "-(n+3)(2n-1)", "(15*pi+48)/(3*pi+8)"),
    pcf("u28", "3n+4", "-(n+2)(2n-1)", "(12+4*pi)/(pi+4)"),
    series("u29", "4^n*(12n-5)/((2n-1)*binom(4n, 2n))", 1, "3*pi/2+2", ""),
    pcf("u30", "3n+2", "-(n+1)(2n-1)", "(pi+4)/(pi+2)"),
    pcf("u31", "3n+5", "-(n+3)(2n-1)", "(84+27*pi)/(6*pi+20)"),
    pcf("u32", "3n^2+9n+5", "-(n+1)^2(n+3)(2n-1)", "3(2*pi+7)/(2*pi+5)"),
    pcf("u33", "-7568n^5-11664n^4+6992n^3+6036n^2-279n-162",
        "-24n(2n+1)(4n-3)(4n-1)(6n-7)(6n-5)(22n^2-39n-1)(22n^2+49n+9)", "-648/(pi+4)",
        "trajectory representative"),
    series("u34", "16^n*(22n^2-17n+3)*binom(4n, 2n)/(n(4n-3)(4n-1)*binom(3n, n)*binom(6n, 3n))", 1, "2*pi", ""),
    pcf("u35", "10", "(2n-1)^2", "(5*pi+16)/pi"),
    series("u36", "36*(-1)^n/((4n^2+5)*((2n+2)^2+5)*(-2n+(2n+1)^3-1))", 1, "7/9-pi/4", ""),
    series("u37", "(-1)^(n-1)/(n(2n+1)(2n+2)(2n+3)(4n-2))", 1, "5/36-pi/24", ""),
    series("u38", "(-1)^n/((2n+1)(2n+2)(2n+3)(2n+4)(2n+5))", 2, "11/84-pi/24", ""),
    pcf("u39", "6", "(2n-1)^2", "3+pi"),
    series("u40", "(-1)^(n+1)/(n(n+1)(2n+1))", 1, "pi-3", ""),
    series("u41", "(-1)^(n-1)/((2n-1)(2n+1)(2n+3))", 1, "pi/8-1/3", ""),
    series("u42a", "(-1)^n/((2n+2)(2n+3))+(-1)^n/((2n+1)(2n+2))", 0, "pi/2-1", ""),
    series("u42b", "(-1)^n/((2n-1)(2n+1))", 1, "1/2-pi/4", ""),
    series("u43", "(-1)^n/(2n+1)", 0, "pi/4", "Leibniz"),
    pcf("u44", "1", "n(n+1)", "2/(pi-2)"),
    pcf("u45", "2", "n^2", "-2/(pi-4)"),
    series("u46a", "(1/16)^(n+1)*binom(2n, n)*binom(2n+2, n+1)/((n+1)(2n+1))", 0, "2/pi-1/2", ""),
    series("u46b", "(1/16)^n*binom(2n, n)^2/(n+1)^2", 0, "16/pi-4", ""),
    series("u47", "16^n/(n^2*(2n+1)^2*binom(2n, n)^2)", 1, "4*pi-12", ""),
    series("u48", "pochhammer(1/2, n)^2/factorial(n+1)^2", 1, "16/pi-5", ""),
]

COLLECTED = [
    series("c01", "(-1)^n*(1/882)^(2n+1)*(21460n+1123)*pochhammer(1/4, n)*pochhammer(1/2, n)*pochhammer(3/4, n)"
           "/factorial(n)^3", 0, "4/pi", "Ramanujan 1914"),
    series("c02", "binom(2n, n)^2*binom(4n, 2n)*(1424799848n^2+1533506502n+108685699)"
           "/((n+1)(2n-1)(4n-1)*(-199148544)^n)", 0, "341446000/pi", ""),
    series("c03", "(-1/82944)^n*binom(2n, n+1)^2*binom(4n, 2n)*(2475740800n^2+4950772932n+2475031103)", 0,
           "-2238840/pi", ""),
    series("c04", "(-1/82944)^n*n^3*binom(2n, n)^2*binom(4n, 2n)*(2428400n^2-5044368n+2584321)", 0,
           "243/(5*pi)", ""),
    series("c05", "(1/4096)^n*(42n^2+81n+38)*binom(2n, n)^3/(n+1)^3", 0, "-512+1728/pi", ""),
    series("c06", "(1/4096)^n*binom(2n, n)^3*(420n^2+992n+551)/((n+1)^2(2n-1))", 0, "-1728/pi", ""),
    series("c07", "(1/4096)^n*binom(2n, n)^3*(56n^2+118n+61)/(n+1)^2", 0, "192/pi", ""),
    series("c08", "(1/4096)^n*binom(2n, n)^3*(2n+1)(6n+1)(14n-3)/(2n-1)^2", 0, "-8/pi", ""),
    series("c09", "(1/4096)^n*(42n+5)*factorial(2n)^3/factorial(n)^6", 0, "16/pi", ""),
    series("c10", "(1/4096)^n*n^2*binom(2n, n)^3*(78162n^2+145175n+64431)/(n+1)^3", 0, "-1321984+4153360/pi", ""),
    series("c11", "(1/4096)^n*n*(210n^2-5n+1)*binom(2n, n)^3", 0, "4/(3*pi)", ""),
    series("c12", "(1/4096)^n*n^2*(504n^2-314n-11)*binom(2n, n)^3", 0, "4/(3*pi)", ""),
    series("c13a", "(1/4096)^n*n^3*binom(2n, n)^3*(198n^2-425n+210)", 0, "-1/(21*pi)", ""),
    series("c13b", "(1/4096)^n*n^2*binom(2n, n)^3*(5544n^3-11900n^2+5880n)", 0, "-4/(3*pi)", ""),
    series("c14", "(1/1458)^n*binom(2n, n)^2*binom(3n, n)*(1524n^2+899n+263)/((n+1)(2n-1)(3n-1))", 0,
           "3375/(4*pi)", ""),
    series("c15", "(1/1458)^n*(15n+2)*factorial(2n)*factorial(3n)/factorial(n)^5", 0, "27/(4*pi)", ""),
    series("c16", "3*(1/16)^n*binom(2n, n)/(2n+1)", 0, "pi", ""),
    series("c17", "-2*(1/16)^n*(6n+5)*binom(2n, n)/((2n-1)(2n+1)(2n+3))", 0, "1/pi", ""),
    series("c18", "(-1/4)^n*(1/(4n+3)+2/(4n+2)+2/(4n+1))", 0, "pi", ""),
    series("c19", "(1/16)^n*(-1/(4(8n+7))-1/(2(8n+6))-1/(2(8n+5))+1/(8n+3)+2/(8n+2)+2/(8n+1))", 0, "pi", ""),
    series("c20", "(1/256)^n*n*(6n-1)*binom(2n, n)^3/(2n-1)^3", 0, "1/(2*pi)", ""),
    series("c21", "(1/256)^n*(12n^2-1)*binom(2n, n)^3/(2n-1)^2", 0, "2/pi", ""),
    series("c22", "(1/256)^n*n^2*binom(2n, n)^3/((2n-3)(2n-1))", 0, "pi", ""),
    series("c23", "(1/256)^n*(6n+1)*binom(2n, n)^3", 0, "4/pi", ""),
    series("c24", "(1/256)^n*(n^2+1)*binom(2n, n)^3*(192n^2-626n-103)", 0, "-1373/(3*pi)", ""),
    series("c25", "(-1/1024)^n*(8n^2-2n-1)*binom(2n, n)^2*binom(4n, 2n)/((n+1)(2n-1)(4n-1))", 0, "-16/pi", ""),
    series("c26", "(-1/1024)^n*(40n^2-2n-1)*binom(2n, n)^2*binom(4n, 2n)/((2n-1)(4n-1))", 0, "-4/pi", ""),
    series("c27", "(-1/1024)^n*(20n+3)*binom(2n, n)^2*binom(4n, 2n)", 0, "8/pi", ""),
    series("c28", "(1/648)^n*(1903n^2+114n+41)*binom(2n, n)^2*binom(4n, 2n)/((n+1)(2n-1)(4n-1))", 0,
           "343/(2*pi)", ""),
    series("c29", "(1/648)^n*(7n+1)*binom(2n, n)^2*binom(4n, 2n)", 0, "9/(2*pi)", ""),
    series("c30", "(-1/64)^n*(4n-1)*binom(2n, n)^3/(2n-1)^3", 0, "2/pi", ""),
    series("c31", "(-1/64)^n*(4n+1)*binom(2n, n)^3/((n+1)(2n-1))", 0, "-4/pi", ""),
    series("c32", "1/((2n-1)(2n+1)(4n-1)(4n+1))", 1, "-1/2+pi/6", ""),
    series("c33", "3/(n(n+1)(4n+1)(4n+3))", 1, "19/3-2*pi", ""),
    series("c34", "(1/2)^n*(25n-3)/binom(3n, n)", 0, "pi/2", ""),
    series("c35", "(2n+1)(3n+1)(14n+11)*binom(2n, n)/((2n-1)(4n+1)^2(4n+3)*binom(4n, 2n)^2)", 1, "1/pi", ""),
    series("c36", "(-1/1024)^n*(1/(64(10n+9))-1/(16(10n+7))-1/(16(10n+5))-1/(10n+3)+4/(10n+1)"
           "-1/(64(4n+3))-1/(2(4n+1)))", 0, "pi", "Bellard"),
    series("c37", "(-1/64)^n*(28n^2+10n+1)*binom(2n, n)^5/((6n+1)*binom(3n, n)*binom(6n, 3n))", 0, "3/pi", ""),
    series("c38", "(1/16)^n*(-1/(8n+6)-1/(8n+5)-2/(8n+4)+4/(8n+1))", 0, "pi", "BBP"),
    series("c39", "(1/16)^n*(-1/(8n+7)+4/(8n+4)+4/(8n+3)+8/(8n+2))", 0, "2*pi", ""),
    series("c40", "(3/5)^(6n)*pochhammer(1/6, n)*pochhammer(1/3, n)*pochhammer(2/3, n)*pochhammer(5/6, n)"
           "*(133n^2+79n+6)/((2n+1)*pochhammer(1/2, n)*factorial(n)^3)", 0, "625/(32*pi)", ""),
    series("c41", "(1/64)^n*pochhammer(1/10, n)*pochhammer(3/10, n)*pochhammer(7/10, n)*pochhammer(9/10, n)"
           "*(2100n^2+1160n+63)/((2n+1)*pochhammer(1/2, n)*factorial(n)^3)", 0, "200/pi", ""),
    series("c42", "(-16)^n*(40n^2-12n-1)*binom(2n, n)/(n(2n-1)^2(4n+1)*binom(4n, 2n)^2)", 1, "8-4*pi", ""),
    series("c43", "(1/186624)^n*binom(4n, 2n)*binom(6n, 3n)*binom(6n, 4n)*(25-108n^2)/(6n-5)^2", 0, "3/(5*pi)", ""),
    series("c44", "(-1)^(n-1)/((2n-1)(2n+1)(2n+3)(2n+5)(2n+7))", 1, "pi/96-2/63", ""),
    series("c45", "(-1)^(n-1)/((2n-1)(2n+1)(2n+3)(2n+5))", 1, "pi/24-11/90", ""),
    series("c46", "1/(n(2n-1)(4n-3))", 1, "pi/3", ""),
]

# Double sums whose partial sums need order-3 recurrences.
HIGHER_ORDER_PI = [
    series("h01", "(1/32)^n*n*sum(k, 0, n, binom(2n-2k, n-k)^2*binom(2k, k)^2)", 0, "2/pi", ""),
    series("h02", "(-1/32)^n*(3n+1)*sum(k, 0, n, binom(2n-2k, n-k)*binom(2k, k)*binom(n, k)^2)", 0, "2/pi", ""),
]

PI_CMF_NODES = [
    cmf_node("cmf(1,0,0)", [1, 0, 0], P0),
    cmf_node("cmf(1,1,1)", [1, 1, 1], P0),
    cmf_node("cmf(1,1,2)", [1, 1, 2], P0),
    cmf_node("cmf(2,1,1)", [2, 1, 1], P0),
    cmf_node("cmf(3,1,1)", [3, 1, 1], P0),
    cmf_node("cmf(0,0,1)", [0, 0, 1], P1),
    cmf_node("cmf(-1,3,3)", [-1, 3, 3], P1),
]

# Expected memberships: CMF representative -> formula ids in its tree.
PI_EXPECTED = {
    "cmf(1,1,2)": ["u01", "u02", "u03", "u04"],
    "cmf(3,1,1)": ["u05"],
    "cmf(2,1,1)": ["u06", "u07", "u08"],
    "cmf(1,0,0)": ["u09", "u10", "u11", "u12", "u13", "u14", "u15", "u16", "u17", "u18", "u19", "u20", "u21a",
                   "u21b", "u21c", "u22", "u23", "u24", "u25", "u26", "u27", "u28", "u29", "u30", "u31", "u32"],
    "cmf(-1,3,3)": ["u33", "u34"],
    "cmf(1,1,1)": ["u35", "u36", "u37", "u38", "u39", "u40", "u41", "u42a", "u42b", "u43"],
    "cmf(0,0,1)": ["u44", "u45", "u46a", "u46b", "u47", "u48"],
}

ZETA3 = [
    series("z1", "1/n^3", 1, "zeta3", "", "zeta3"),
    series("z2", "1/(n^3(n^2-1))", 2, "5/4-zeta3", "Kummer", "zeta3"),
]

CATALAN = [
    pcf("g1", "8n^2+8n+7", "-16n^4", "1/(2-2*catalan)", "", "catalan"),
    pcf("g2", "8n^2+12n+5", "-16n^3(n+1)", "2/(2*catalan-1)", "", "catalan"),
    series("g3", "(1/2)^(n+1)*sum(k, 0, n, binom(n, k)*(-1)^k/(2k+1)^2)", 0, "catalan", "", "catalan"),
    series("g4", "2^n/((2n+1)*binom(2n, n))*sum(k, 0, n, 1/(2k+1))", 0, "2*catalan", "", "catalan"),
]

E = [
    pcf("e1", "n^2+6n+7", "-n^2(n+3)", "6*e/(2*e-3)", "", "e"),
    pcf("e2", "n^2+3n+3", "-n^2(n+2)", "4*e/(2*e-1)", "", "e"),
]


def write(name, formulas, cmf_nodes=(), expected=None):
    doc = {"schema_version": 1, "formulas": formulas}
    if cmf_nodes:
        doc["cmf_nodes"] = list(cmf_nodes)
    if expected:
        doc["expected_clusters"] = expected
    (OUT / name).write_text(json.dumps(doc, indent=1) + "\n")
    print(name, len(formulas), "records")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    t1_nodes = [n for n in PI_CMF_NODES if n["id"] in ("cmf(1,0,0)", "cmf(1,1,1)")]
    write("table1.json", TABLE1, t1_nodes,
          {"cmf(1,0,0)": ["t1-1", "t1-2", "t1-5"], "cmf(1,1,1)": ["t1-3", "t1-4"]})
    write("pi.json", UNIFIED + COLLECTED + HIGHER_ORDER_PI, PI_CMF_NODES, PI_EXPECTED)
    write("zeta3.json", ZETA3)
    write("catalan.json", CATALAN)
    write("e.json", E)


if __name__ == "__main__":
    main()
