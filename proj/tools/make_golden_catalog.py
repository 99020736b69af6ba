#!/usr/bin/env python3
"""Regenerates data/golden: the 10-order benchmark catalog, its reference
RFS documents and the three CoT exemplars.

The sizing rules below are the ones the exemplar chains of thought spell out,
so the references stay consistent with what FEW prompts teach.
"""
import json
import math
import pathlib
import sys

VOCABULARY = ["slice_type", "latency_ms", "throughput_mbps", "max_users",
              "reliability_pct", "region"]

ORDERS = [
    # order_id, category, region, latency_ms, throughput_mbps, max_users, reliability_pct
    ("SO-001", "eMBB", "Paris", 20, 1000, 5000, 99.9),
    ("SO-002", "eMBB", "Lyon", 30, 500, 2000, 99.9),
    ("SO-003", "eMBB", "Marseille", 25, 800, 3000, 99.5),
    ("SO-004", "eMBB", "Lille", 40, 300, 1500, 99.0),
    ("SO-005", "eMBB", "Toulouse", 20, 1200, 8000, 99.9),
    ("SO-006", "URLLC", "Paris", 10, 50, 1000, 99.999),
    ("SO-007", "URLLC", "Lyon", 5, 20, 500, 99.999),
    ("SO-008", "URLLC", "Nice", 8, 100, 200, 99.99),
    ("SO-009", "URLLC", "Bordeaux", 10, 30, 1000, 99.999),
    ("SO-010", "URLLC", "Nantes", 4, 10, 100, 99.9999),
]

EXEMPLARS = [
    ("EX-001", "eMBB", "Strasbourg", 30, 600, 2500, 99.9),
    ("EX-002", "URLLC", "Grenoble", 6, 40, 400, 99.999),
    ("EX-003", "eMBB", "Rennes", 50, 200, 800, 99.0),
]


def num(v):
    if isinstance(v, float) and v.is_integer():
        return int(v)
    return v


def product_id(category, region):
    return f"P-{category.upper()}-{region.upper()}"


def size(category, latency, throughput, users, reliability):
    urllc = category == "URLLC"
    sst = 2 if urllc else 1
    ran_budget = num(round(0.4 * latency, 3))
    core_budget = num(round(0.4 * latency, 3))
    tp_units = math.ceil(throughput / 250)
    ran = {
        "RU": {"cpu_cores": 2, "ram_mb": 2048, "storage_gb": 8,
               "replicas": math.ceil(users / 500),
               "bandwidth_mhz": 40 if urllc else 100, "tx_power_dbm": 43},
        "DU": {"cpu_cores": 4 + 2 * math.ceil(throughput / 500), "ram_mb": 4096,
               "storage_gb": 16, "replicas": math.ceil(users / 1000),
               "numerology": 2 if urllc else 1},
        "CU": {"cpu_cores": 4, "ram_mb": 4096, "storage_gb": 20,
               "replicas": 2 if reliability >= 99.99 else 1,
               "pdcp_duplication": urllc},
    }
    core = {
        "UPF": {"cpu_cores": 2 * tp_units, "ram_mb": 1024 * tp_units, "storage_gb": 20,
                "replicas": 2 if reliability >= 99.999 else 1,
                "max_sessions": users, "qos_5qi": 82 if urllc else 9},
        "AMF": {"cpu_cores": 2, "ram_mb": 2048, "storage_gb": 10,
                "replicas": math.ceil(users / 5000), "max_registered_ues": users},
        "PCF": {"cpu_cores": 1, "ram_mb": 1024, "storage_gb": 5, "replicas": 1,
                "session_ambr_mbps": throughput},
        "SMF": {"cpu_cores": 2, "ram_mb": 2048, "storage_gb": 10, "replicas": 1,
                "max_pdu_sessions": users},
        "AUSF": {"cpu_cores": 1, "ram_mb": 1024, "storage_gb": 5, "replicas": 1},
        "NSSF": {"cpu_cores": 1, "ram_mb": 512, "storage_gb": 5, "replicas": 1,
                 "sst": sst},
    }
    slice_ = {"sst": sst,
              "latency_budget_ms": {"ran": ran_budget, "core": core_budget},
              "guaranteed_throughput_mbps": throughput}
    return ran, core, slice_


def scalar(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def to_yaml(order_id, ran, core, slice_, indent=0):
    pad = " " * indent
    lines = [f"{pad}order_ref: {order_id}", f"{pad}ran:"]
    for section, nfs in (("ran", ran), ("core", core)):
        if section == "core":
            lines.append(f"{pad}core:")
        for nf, fields in nfs.items():
            lines.append(f"{pad}  {nf}:")
            for k, v in fields.items():
                lines.append(f"{pad}    {k}: {scalar(v)}")
    lines.append(f"{pad}slice:")
    lines.append(f"{pad}  sst: {slice_['sst']}")
    lines.append(f"{pad}  latency_budget_ms:")
    lines.append(f"{pad}    ran: {slice_['latency_budget_ms']['ran']}")
    lines.append(f"{pad}    core: {slice_['latency_budget_ms']['core']}")
    lines.append(f"{pad}  guaranteed_throughput_mbps: {slice_['guaranteed_throughput_mbps']}")
    return "\n".join(lines) + "\n"


def order_doc(row, created):
    oid, cat, region, lat, tp, users, rel = row
    return {
        "order_id": oid,
        "product_id": product_id(cat, region),
        "intents": {"slice_type": cat, "latency_ms": lat, "throughput_mbps": tp,
                    "max_users": users, "reliability_pct": rel, "region": region},
        "metadata": {"created_at": created, "category": cat, "region": region},
    }


def chain_of_thought(row):
    oid, cat, region, lat, tp, users, rel = row
    urllc = cat == "URLLC"
    budget = num(round(0.4 * lat, 3))
    tp_units = math.ceil(tp / 250)
    steps = [
        f"The order asks for a {cat} slice in {region}: latency {lat} ms, "
        f"throughput {tp} Mbps, {users} users, reliability {rel} %.",
        f"1. Slice/service type {cat} maps to sst = {2 if urllc else 1}.",
        f"2. Latency budget: RAN gets 40 % and core gets 40 % of the end-to-end "
        f"latency, keeping 20 % as transport margin: 0.4 * {lat} ms = {budget} ms "
        f"for RAN and 0.4 * {lat} ms = {budget} ms for core; {budget} + {budget} = "
        f"{num(round(2 * budget, 3))} ms <= {lat} ms.",
        f"3. RU replicas: one RU per 500 users, ceil({users} / 500) = {math.ceil(users / 500)}; "
        f"bandwidth is {40 if urllc else 100} MHz for {cat}.",
        f"4. DU cpu_cores = 4 + 2 * ceil({tp} / 500) = {4 + 2 * math.ceil(tp / 500)}; "
        f"DU replicas = ceil({users} / 1000) = {math.ceil(users / 1000)}; "
        f"numerology {2 if urllc else 1}.",
        f"5. CU replicas = {2 if rel >= 99.99 else 1} because reliability {rel} % is "
        f"{'at least' if rel >= 99.99 else 'below'} 99.99 %; PDCP duplication "
        f"{'on' if urllc else 'off'} for {cat}.",
        f"6. UPF scales with throughput in 250 Mbps units: ceil({tp} / 250) = {tp_units}, "
        f"so cpu_cores = 2 * {tp_units} = {2 * tp_units} and ram_mb = 1024 * {tp_units} = "
        f"{1024 * tp_units}; replicas = {2 if rel >= 99.999 else 1} "
        f"(2 when reliability >= 99.999 %); 5QI {82 if urllc else 9}.",
        f"7. AMF replicas = ceil({users} / 5000) = {math.ceil(users / 5000)}; AMF, SMF and UPF "
        f"session limits equal the {users} supported users; PCF session AMBR = {tp} Mbps.",
        "8. AUSF, PCF and NSSF keep their minimal footprint (1 core, 1 replica).",
        f"9. Guaranteed slice throughput = ordered throughput = {tp} Mbps.",
    ]
    return "\n".join(steps) + "\n"


def block(text, indent):
    pad = " " * indent
    return "".join(pad + line + "\n" for line in text.rstrip("\n").split("\n"))


def main():
    root = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "data/golden")
    (root / "orders").mkdir(parents=True, exist_ok=True)
    (root / "references").mkdir(exist_ok=True)
    (root / "exemplars").mkdir(exist_ok=True)

    header = {"name": "golden-10", "intent_vocabulary": VOCABULARY}
    (root / "catalog.json").write_text(json.dumps(header, indent=2) + "\n")

    products = []
    for i, row in enumerate(ORDERS):
        oid, cat, region, lat, tp, users, rel = row
        products.append({
            "id": product_id(cat, region),
            "name": f"{cat} slice {region}",
            "category": cat,
            "region": region,
            "latency_ms": lat,
            "throughput_mbps": tp,
            "max_users": users,
            "reliability_pct": rel,
            "created_at": f"2024-03-{i + 1:02d}T08:00:00Z",
            "user_expertise": "expert" if i % 2 == 0 else "non-expert",
        })
        created = f"2024-05-{i + 1:02d}T09:30:00Z"
        doc = order_doc(row, created)
        (root / "orders" / f"{oid}.json").write_text(json.dumps(doc, indent=2) + "\n")
        ran, core, slice_ = size(cat, lat, tp, users, rel)
        (root / "references" / f"{oid}.yaml").write_text(to_yaml(oid, ran, core, slice_))
    (root / "products.json").write_text(json.dumps(products, indent=2) + "\n")

    for i, row in enumerate(EXEMPLARS):
        oid, cat, region, lat, tp, users, rel = row
        doc = order_doc(row, f"2024-04-{i + 1:02d}T10:00:00Z")
        doc["product_id"] = product_id(cat, region)
        ran, core, slice_ = size(cat, lat, tp, users, rel)
        text = "question: |\n" + block(json.dumps(doc, indent=2), 2)
        text += "cot: |\n" + block(chain_of_thought(row), 2)
        text += "answer: |\n" + block(to_yaml(oid, ran, core, slice_), 2)
        (root / "exemplars" / f"{oid}.yaml").write_text(text)


if __name__ == "__main__":
    main()
