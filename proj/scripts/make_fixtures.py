#!/usr/bin/env python3
"""Regenerates the committed fixtures under data/fixtures/.

The CSV/JSON files in the repository are canonical; this script documents
how they were produced and lets them be rebuilt if the designs change.
Requires numpy.
"""
import json
import os
import numpy as np

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..")
FIXTURES = os.path.join(ROOT, "data", "fixtures")


# ---------------------------------------------------------------------------
# blobs3: three well-separated macro-blobs, each a bundle of tight micro-sites
# (gives a SOM init something to improve on: random-row init already sits on
# data, so plain Gaussian blobs start near-optimal).
# ---------------------------------------------------------------------------

def make_blobs(seed=779, n_macro=3, sites_per=10, pts=300, site_sigma=1.1,
               scatter=0.005, macro_scale=4.0, min_site_gap=1.0):
    gen = np.random.default_rng(seed)
    centers = np.array([
        [0, 0, 0, 0, 0],
        [1, 1, 0, -1, 0.6],
        [-1, 0.5, 1, 1, -0.6],
    ], dtype=float) * macro_scale
    X, y = [], []
    per = pts // n_macro
    for b in range(n_macro):
        sites = []
        while len(sites) < sites_per:
            cand = centers[b] + site_sigma * gen.standard_normal(5)
            if all(np.linalg.norm(cand - s) >= min_site_gap for s in sites):
                sites.append(cand)
        counts = np.full(sites_per, per // sites_per)
        counts[: per % sites_per] += 1
        for s, c in zip(sites, counts):
            X.append(s + scatter * gen.standard_normal((c, 5)))
            y.extend([b] * c)
    return np.vstack(X), np.array(y)


def write_blobs():
    X, y = make_blobs()
    out_dir = os.path.join(FIXTURES, "blobs3")
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "blobs.csv"), "w") as f:
        f.write("point_id,f1,f2,f3,f4,f5,label\n")
        for i, (row, lab) in enumerate(zip(X, y)):
            cells = ",".join(repr(float(v)) for v in row)
            f.write(f"b{i + 1:03d},{cells},{lab}\n")
    print(f"blobs3: {len(X)} points")


# ---------------------------------------------------------------------------
# minicensus: 322 synthetic electoral divisions drawn from three
# socio-economic archetypes, emitted as raw counts plus a 53-feature recipe.
# ---------------------------------------------------------------------------

ARCH_SIZES = [120, 110, 92]
N_REGIONS = sum(ARCH_SIZES)
CONC_STRUCT = 150.0   # dirichlet concentration for structured families
CONC_NOISE = 10.0     # for noise families (high region-to-region scatter)

AGE = {0: [0.05, 0.07, 0.17, 0.42, 0.20, 0.09],
       1: [0.10, 0.17, 0.10, 0.29, 0.24, 0.10],
       2: [0.03, 0.05, 0.07, 0.18, 0.28, 0.39]}
MARITAL = {0: [0.66, 0.24, 0.03, 0.07],
           1: [0.40, 0.50, 0.04, 0.06],
           2: [0.33, 0.42, 0.19, 0.06]}
EDU = {0: [0.05, 0.20, 0.47, 0.28],
       1: [0.15, 0.47, 0.29, 0.09],
       2: [0.28, 0.48, 0.19, 0.05]}
EMPL = {0: [0.66, 0.06, 0.16, 0.05, 0.07],
        1: [0.52, 0.09, 0.20, 0.09, 0.10],
        2: [0.26, 0.05, 0.09, 0.47, 0.13]}
TENURE = {0: [0.08, 0.20, 0.62, 0.10],
          1: [0.25, 0.50, 0.13, 0.12],
          2: [0.66, 0.15, 0.09, 0.10]}
HHCOMP = {0: [0.28, 0.23, 0.10, 0.06, 0.28, 0.05],
          1: [0.11, 0.15, 0.50, 0.12, 0.05, 0.07],
          2: [0.39, 0.31, 0.10, 0.08, 0.03, 0.09]}
CLASS = {0: [0.18, 0.31, 0.24, 0.15, 0.06, 0.06],
         1: [0.07, 0.22, 0.37, 0.22, 0.07, 0.05],
         2: [0.05, 0.15, 0.33, 0.27, 0.13, 0.07]}
COMMUTE = {0: [0.17, 0.13, 0.25, 0.23, 0.16, 0.06],
           1: [0.05, 0.04, 0.15, 0.62, 0.08, 0.06],
           2: [0.11, 0.03, 0.22, 0.51, 0.05, 0.08]}
BROADBAND = {0: [0.80, 0.20], 1: [0.62, 0.38], 2: [0.52, 0.48]}
CAR = {0: [0.10, 0.90], 1: [0.30, 0.70], 2: [0.16, 0.84]}
NOISE3 = [1 / 3, 1 / 3, 1 / 3]
CASE_RATE = {0: 0.0102, 1: 0.0063, 2: 0.0041}

AGE_BAND_COLS = [None,  # band 0 is covered by the per-year columns
                 ("T1_1AGE5_14M", "T1_1AGE5_14F"),
                 ("T1_1AGE15_24M", "T1_1AGE15_24F"),
                 ("T1_1AGE25_44M", "T1_1AGE25_44F"),
                 ("T1_1AGE45_64M", "T1_1AGE45_64F"),
                 ("T1_1AGE65PM", "T1_1AGE65PF")]
YEAR_COLS_M = [f"T1_1AGE{y}M" for y in range(5)]
YEAR_COLS_F = [f"T1_1AGE{y}F" for y in range(5)]

NAME_A = ["Bally", "Rath", "Clon", "Dun", "Knock", "Kil", "Glas", "Drum",
          "Cool", "Castle", "Tem", "Finn"]
NAME_B = ["fermot", "mines", "tarf", "boden", "lough", "more", "nevin",
          "condra", "ock", "town", "gar", "brook"]
NAME_C = ["", "", "", " North", " South", " East", " West", ", The Ward",
          " Upper", " Lower"]


def region_name(i):
    return (NAME_A[i % len(NAME_A)] + NAME_B[(i // len(NAME_A)) % len(NAME_B)]
            + NAME_C[(i * 7) % len(NAME_C)])


def build_minicensus(seed=20260823):
    gen = np.random.default_rng(seed)

    def frac(base, conc):
        return gen.dirichlet(np.array(base) * conc)

    columns = []
    columns += [c for pair in zip(YEAR_COLS_M, YEAR_COLS_F) for c in pair]
    for pair in AGE_BAND_COLS[1:]:
        columns += list(pair)
    columns += ["T1_1AGETM", "T1_1AGETF", "T1_1AGETT"]
    columns += ["T1_2SGL", "T1_2MAR", "T1_2WID", "T1_2DIV", "T1_2T"]
    columns += ["T10_4_NF", "T10_4_S", "T10_4_T", "T10_4_PG", "T10_4_TT"]
    columns += ["T8_1_WT", "T8_1_ULT", "T8_1_ST", "T8_1_RT", "T8_1_OTHT",
                "T8_1_TT"]
    columns += ["T6_3_OO", "T6_3_OM", "T6_3_RP", "T6_3_RS", "T6_3_TH"]
    columns += ["T5_2_1PH", "T5_2_CNCH", "T5_2_CWCH", "T5_2_LPH", "T5_2_NFH",
                "T5_2_OTH", "T5_2_TH"]
    columns += ["T9_1_PW", "T9_1_MT", "T9_1_NM", "T9_1_SK", "T9_1_SS",
                "T9_1_OTH", "T9_1_TT"]
    columns += ["T11_1_FW", "T11_1_BIW", "T11_1_BUW", "T11_1_CDW",
                "T11_1_TW", "T11_1_OTW", "T11_1_TT"]
    columns += ["T2_4_A", "T2_4_B", "T2_4_C"]
    columns += ["T2_1_IE", "T2_1_UK", "T2_1_OTH"]
    columns += ["T2_6_E", "T2_6_O", "T2_6_N"]
    columns += ["T15_3_B", "T15_3_OTH", "T15_3_TH"]
    columns += ["T15_1_NC", "T15_1_C", "T15_1_TH"]

    rows = []
    cases = []
    for r in range(N_REGIONS):
        arch = 0 if r < ARCH_SIZES[0] else (
            1 if r < ARCH_SIZES[0] + ARCH_SIZES[1] else 2)
        pop = int(gen.integers(1800, 9500))
        hh = max(1, int(round(pop / gen.uniform(2.2, 3.1))))
        workers = max(1, int(round(pop * gen.uniform(0.38, 0.52))))
        edu_total = max(1, int(round(pop * gen.uniform(0.55, 0.75))))

        age = gen.multinomial(pop, frac(AGE[arch], CONC_STRUCT))
        age_m = np.array(
            [gen.binomial(c, gen.uniform(0.46, 0.54)) for c in age])
        year_m = gen.multinomial(age_m[0], [0.2] * 5)
        year_f = gen.multinomial(age[0] - age_m[0], [0.2] * 5)
        mar = gen.multinomial(pop, frac(MARITAL[arch], CONC_STRUCT))
        edu = gen.multinomial(edu_total, frac(EDU[arch], CONC_STRUCT))
        emp = gen.multinomial(pop, frac(EMPL[arch], CONC_STRUCT))
        ten = gen.multinomial(hh, frac(TENURE[arch], CONC_STRUCT))
        hhc = gen.multinomial(hh, frac(HHCOMP[arch], CONC_STRUCT))
        cls = gen.multinomial(pop, frac(CLASS[arch], CONC_STRUCT))
        com = gen.multinomial(workers, frac(COMMUTE[arch], CONC_STRUCT))
        rel = gen.multinomial(pop, frac(NOISE3, CONC_NOISE))
        nat = gen.multinomial(pop, frac(NOISE3, CONC_NOISE))
        lang = gen.multinomial(pop, frac(NOISE3, CONC_NOISE))
        bb = gen.multinomial(hh, frac(BROADBAND[arch], CONC_STRUCT))
        car = gen.multinomial(hh, frac(CAR[arch], CONC_STRUCT))

        values = {}
        for y in range(5):
            values[YEAR_COLS_M[y]] = year_m[y]
            values[YEAR_COLS_F[y]] = year_f[y]
        for band in range(1, 6):
            m_col, f_col = AGE_BAND_COLS[band]
            values[m_col] = age_m[band]
            values[f_col] = age[band] - age_m[band]
        values["T1_1AGETM"] = age_m.sum()
        values["T1_1AGETF"] = pop - age_m.sum()
        values["T1_1AGETT"] = pop
        for col, v in zip(["T1_2SGL", "T1_2MAR", "T1_2WID", "T1_2DIV"], mar):
            values[col] = v
        values["T1_2T"] = pop
        for col, v in zip(["T10_4_NF", "T10_4_S", "T10_4_T", "T10_4_PG"],
                          edu):
            values[col] = v
        values["T10_4_TT"] = edu_total
        for col, v in zip(
                ["T8_1_WT", "T8_1_ULT", "T8_1_ST", "T8_1_RT", "T8_1_OTHT"],
                emp):
            values[col] = v
        values["T8_1_TT"] = pop
        for col, v in zip(["T6_3_OO", "T6_3_OM", "T6_3_RP", "T6_3_RS"], ten):
            values[col] = v
        values["T6_3_TH"] = hh
        for col, v in zip(["T5_2_1PH", "T5_2_CNCH", "T5_2_CWCH", "T5_2_LPH",
                           "T5_2_NFH", "T5_2_OTH"], hhc):
            values[col] = v
        values["T5_2_TH"] = hh
        for col, v in zip(["T9_1_PW", "T9_1_MT", "T9_1_NM", "T9_1_SK",
                           "T9_1_SS", "T9_1_OTH"], cls):
            values[col] = v
        values["T9_1_TT"] = pop
        for col, v in zip(["T11_1_FW", "T11_1_BIW", "T11_1_BUW", "T11_1_CDW",
                           "T11_1_TW", "T11_1_OTW"], com):
            values[col] = v
        values["T11_1_TT"] = workers
        for col, v in zip(["T2_4_A", "T2_4_B", "T2_4_C"], rel):
            values[col] = v
        for col, v in zip(["T2_1_IE", "T2_1_UK", "T2_1_OTH"], nat):
            values[col] = v
        for col, v in zip(["T2_6_E", "T2_6_O", "T2_6_N"], lang):
            values[col] = v
        values["T15_3_B"], values["T15_3_OTH"] = bb
        values["T15_3_TH"] = hh
        values["T15_1_NC"], values["T15_1_C"] = car
        values["T15_1_TH"] = hh

        rows.append([int(values[c]) for c in columns])
        rate = CASE_RATE[arch] * gen.uniform(0.8, 1.25)
        cases.append(int(gen.binomial(pop, rate)))

    return columns, rows, cases


def recipe_json():
    derived = []

    def add(name, sources, denominator=None):
        entry = {"name": name, "sources": sources}
        if denominator:
            entry["denominator"] = denominator
        derived.append(entry)

    year_cols = [c for pair in zip(YEAR_COLS_M, YEAR_COLS_F) for c in pair]
    add("Age0_4", year_cols)
    add("Age5_14", list(AGE_BAND_COLS[1]))
    add("Age15_24", list(AGE_BAND_COLS[2]))
    add("Age25_44", list(AGE_BAND_COLS[3]))
    add("Age65Plus", list(AGE_BAND_COLS[5]))
    for y in range(5):
        add(f"AgeYear{y}", [YEAR_COLS_M[y], YEAR_COLS_F[y]])
    add("Male", ["T1_1AGETM"])
    add("Female", ["T1_1AGETF"])
    add("Single", ["T1_2SGL"], "T1_2T")
    add("Married", ["T1_2MAR"], "T1_2T")
    add("Divorced", ["T1_2DIV"], "T1_2T")
    add("EduSecondary", ["T10_4_S"], "T10_4_TT")
    add("EduThird", ["T10_4_T"], "T10_4_TT")
    add("EduPostgrad", ["T10_4_PG"], "T10_4_TT")
    add("HigherEd", ["T10_4_T", "T10_4_PG"], "T10_4_TT")
    add("Employed", ["T8_1_WT"], "T8_1_TT")
    add("Unemployed", ["T8_1_ULT"], "T8_1_TT")
    add("Students", ["T8_1_ST"], "T8_1_TT")
    add("Retired", ["T8_1_RT"], "T8_1_TT")
    add("InLabourForce", ["T8_1_WT", "T8_1_ULT"], "T8_1_TT")
    add("Mortgage", ["T6_3_OM"], "T6_3_TH")
    add("PrivateRent", ["T6_3_RP"], "T6_3_TH")
    add("SocialRent", ["T6_3_RS"], "T6_3_TH")
    add("RentAny", ["T6_3_RP", "T6_3_RS"], "T6_3_TH")
    add("OnePersonHH", ["T5_2_1PH"], "T5_2_TH")
    add("CoupleNoChildHH", ["T5_2_CNCH"], "T5_2_TH")
    add("CoupleChildHH", ["T5_2_CWCH"], "T5_2_TH")
    add("LoneParentHH", ["T5_2_LPH"], "T5_2_TH")
    add("NonFamilyHH", ["T5_2_NFH"], "T5_2_TH")
    add("ClassProfessional", ["T9_1_PW"], "T9_1_TT")
    add("ClassManagerial", ["T9_1_MT"], "T9_1_TT")
    add("ClassNonManual", ["T9_1_NM"], "T9_1_TT")
    add("ClassSkilled", ["T9_1_SK"], "T9_1_TT")
    add("ClassSemiSkilled", ["T9_1_SS"], "T9_1_TT")
    add("CommuteFoot", ["T11_1_FW"], "T11_1_TT")
    add("CommuteBicycle", ["T11_1_BIW"], "T11_1_TT")
    add("CommuteBus", ["T11_1_BUW"], "T11_1_TT")
    add("CommuteCarDriver", ["T11_1_CDW"], "T11_1_TT")
    add("CommuteOther", ["T11_1_OTW"], "T11_1_TT")
    add("ReligionA", ["T2_4_A"])
    add("ReligionB", ["T2_4_B"])
    add("NationalityIrish", ["T2_1_IE"])
    add("NationalityUK", ["T2_1_UK"])
    add("LanguageEnglishOnly", ["T2_6_E"])
    add("LanguageOther", ["T2_6_O"])
    add("Broadband", ["T15_3_B"], "T15_3_TH")
    add("NoCar", ["T15_1_NC"], "T15_1_TH")
    add("YoungAdults", [c for pair in AGE_BAND_COLS[2:4] for c in pair])
    add("Children", year_cols + list(AGE_BAND_COLS[1]))
    assert len(derived) == 53, len(derived)
    return {"format": "geosom.recipe", "version": "1.0",
            "population_column": "T1_1AGETT", "derived": derived}


# 23 x 14 grid of cells over a Dublin-sized bounding box; the last three
# regions become two-part MultiPolygons and one region gets a hole, so the
# GeoJSON path covers every geometry case.
GRID_COLS, GRID_ROWS = 23, 14
LON0, LON1 = -6.45, -6.05
LAT0, LAT1 = 53.20, 53.45


def region_geometry(i):
    col = i % GRID_COLS
    row = i // GRID_COLS
    dlon = (LON1 - LON0) / GRID_COLS
    dlat = (LAT1 - LAT0) / GRID_ROWS
    x0 = LON0 + col * dlon
    y0 = LAT0 + row * dlat
    x1, y1 = x0 + dlon, y0 + dlat

    def ring(a, b, c, d):
        return [[a, c], [b, c], [b, d], [a, d], [a, c]]

    if i >= N_REGIONS - 3:  # two-part regions
        xm = x0 + 0.42 * dlon
        xg = x0 + 0.55 * dlon
        return {"type": "MultiPolygon",
                "coordinates": [[ring(x0, xm, y0, y1)],
                                [ring(xg, x1, y0, y1)]]}
    if i == 100:  # one region with a lake
        hole = ring(x0 + 0.3 * dlon, x0 + 0.6 * dlon,
                    y0 + 0.3 * dlat, y0 + 0.6 * dlat)
        hole.reverse()
        return {"type": "Polygon",
                "coordinates": [ring(x0, x1, y0, y1), hole]}
    return {"type": "Polygon", "coordinates": [ring(x0, x1, y0, y1)]}


def write_minicensus():
    columns, rows, cases = build_minicensus()
    out_dir = os.path.join(FIXTURES, "minicensus")
    os.makedirs(out_dir, exist_ok=True)
    ids = [f"E{2000 + i + 1:05d}" for i in range(N_REGIONS)]

    with open(os.path.join(out_dir, "census.csv"), "w") as f:
        f.write("GEOGID,GEOGDESC," + ",".join(columns) + "\n")
        for i, row in enumerate(rows):
            name = region_name(i)
            if "," in name or '"' in name:
                name = '"' + name.replace('"', '""') + '"'
            f.write(f"{ids[i]},{name}," + ",".join(str(v) for v in row)
                    + "\n")

    with open(os.path.join(out_dir, "recipe.json"), "w") as f:
        json.dump(recipe_json(), f, indent=2)
        f.write("\n")

    pop_idx = columns.index("T1_1AGETT")
    with open(os.path.join(out_dir, "cases.csv"), "w") as f:
        f.write("region_id,cases,population\n")
        for i, row in enumerate(rows):
            f.write(f"{ids[i]},{cases[i]},{row[pop_idx]}\n")

    features = []
    for i in range(N_REGIONS):
        features.append({"type": "Feature",
                         "properties": {"region_id": ids[i],
                                        "name": region_name(i)},
                         "geometry": region_geometry(i)})
    with open(os.path.join(out_dir, "regions.geojson"), "w") as f:
        json.dump({"type": "FeatureCollection", "features": features}, f)
        f.write("\n")

    config = {
        "format": "geosom.config",
        "version": "1.0",
        "paths": {"census": "census.csv", "recipe": "recipe.json",
                  "cases": "cases.csv", "geometries": "regions.geojson",
                  "output_dir": "out"},
        "ingest": {"id_column": "GEOGID", "name_column": "GEOGDESC"},
        "geo": {"id_property": "region_id"},
        "dimred": {"kernel": {"kind": "gaussian"},
                   "components": 4, "feature_count": 21,
                   "hopkins_fraction": 0.2},
        "som": {"rows": 18, "cols": 15, "sigma0": 9.0, "theta0": 0.57,
                "iterations": 6440},
        "validity": {"k_min": 3, "k_max": 9},
        "include_outcome_features": True,
        "seed": 7,
    }
    with open(os.path.join(out_dir, "config.json"), "w") as f:
        json.dump(config, f, indent=2)
        f.write("\n")
    print(f"minicensus: {N_REGIONS} regions, {len(columns)} count columns")


if __name__ == "__main__":
    write_blobs()
    write_minicensus()
