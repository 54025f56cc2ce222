"""Independent brute-force recount of profiler tables from a relation dump.

Works directly on the TSV text of the relation dump with plain dict
arithmetic.  Deliberately shares no code with nomsupport.profiler so that
agreement between the two is meaningful.
"""


def _rows(dump_text):
    lines = dump_text.splitlines()
    for line in lines[1:]:  # skip header
        if not line.strip():
            continue
        kind, governor, prep, dependent, doc_id, sent_index, gov_idx, dep_idx = (
            line.split("\t")
        )
        yield {
            "kind": kind,
            "governor": governor,
            "prep": prep,
            "dependent": dependent,
            "doc": doc_id,
            "sent": int(sent_index),
            "gov_idx": int(gov_idx),
            "dep_idx": int(dep_idx),
        }


def verbal_profile(dump_text, verb):
    counts = {}
    for row in _rows(dump_text):
        if row["kind"] == "VPP" and row["governor"] == verb and row["prep"] != "by":
            counts[row["prep"]] = counts.get(row["prep"], 0) + 1
    return counts


def nominal_profile(dump_text, noun):
    counts = {}
    for row in _rows(dump_text):
        if row["kind"] == "NPP" and row["governor"] == noun:
            counts[row["prep"]] = counts.get(row["prep"], 0) + 1
    return counts


def top_preps(profile_counts, k=3):
    ordered = sorted(profile_counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [prep for prep, _ in ordered[:k]]


def naive_table(dump_text, noun):
    counts = {}
    for row in _rows(dump_text):
        if row["kind"] == "DOBJ" and row["dependent"] == noun:
            counts[row["governor"]] = counts.get(row["governor"], 0) + 1
    return counts


def selection_count(dump_text, noun, preps):
    wanted = set(preps)
    return sum(
        1
        for row in _rows(dump_text)
        if row["kind"] == "NPP"
        and row["governor"] == noun
        and row["prep"] in wanted
    )


def filtered_table(dump_text, noun, preps):
    wanted = set(preps)
    qualifying_nps = set()
    for row in _rows(dump_text):
        if row["kind"] == "NPP" and row["governor"] == noun and row["prep"] in wanted:
            qualifying_nps.add((row["doc"], row["sent"], row["gov_idx"]))
    counts = {}
    for row in _rows(dump_text):
        if (
            row["kind"] == "DOBJ"
            and row["dependent"] == noun
            and (row["doc"], row["sent"], row["dep_idx"]) in qualifying_nps
        ):
            counts[row["governor"]] = counts.get(row["governor"], 0) + 1
    return counts


def overlap_table(dump_text, verb, noun):
    dobj = {}
    ngen = {}
    for row in _rows(dump_text):
        if row["kind"] == "DOBJ" and row["governor"] == verb:
            dobj[row["dependent"]] = dobj.get(row["dependent"], 0) + 1
        if row["kind"] == "NGEN" and row["governor"] == noun:
            ngen[row["dependent"]] = ngen.get(row["dependent"], 0) + 1
    table = {}
    for obj in set(dobj) | set(ngen):
        table[obj] = (dobj.get(obj, 0), ngen.get(obj, 0))
    return table
