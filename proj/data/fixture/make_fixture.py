#!/usr/bin/env python3
"""Writes the small English news fixture used by the pipeline tests.

Outputs (next to this script):
  train.jsonl, train_labels.csv   labeled training corpus for the two models
  run.jsonl                       20-article weekly batch scored by `run`
  gazetteer.csv, dictionary.txt   postprocessing inputs

The model bundles are then produced with the command-line tool; see
make_fixture.sh. Everything is deterministic.
"""
import csv
import json
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent
rng = random.Random(20230306)

SITES = {
    "chitwan": "Chitwan National Park",
    "kaziranga": "Kaziranga National Park",
    "sundarbans": "Sundarbans Reserve Forest",
    "bardia": "Bardia National Park",
    "manas": "Manas Wildlife Sanctuary",
}
ANIMALS = ["rhino", "tiger", "elephant", "leopard", "gharial", "deer"]
PROJECTS = ["highway", "railway line", "hydropower dam", "oil pipeline", "transmission line"]

THREAT_TITLES = [
    "Poachers kill {animal} near {site}",
    "Illegal logging spreads inside {site}",
    "Forest fire destroys habitat in {site}",
    "Encroachment threatens {animal} habitat at {site}",
    "Rangers seize {animal} parts after poaching raid",
    "Wildlife trafficking ring busted near {site}",
]
THREAT_SENTENCES = [
    "Rangers found the carcass of a {animal} with its horn removed, a clear sign of poaching.",
    "Officials said illegal logging has destroyed large patches of forest around the core area.",
    "Conservationists warned that encroachment by settlers is shrinking the {animal} habitat.",
    "The fire burned for three days and destroyed nesting grounds used by endangered species.",
    "Police arrested two suspects accused of wildlife trafficking and seized {animal} skins.",
    "Park authorities reported a sharp rise in poaching incidents this season.",
    "Sand mining along the river bank is damaging the breeding habitat of the {animal}.",
    "Experts say the pollution threatens the fragile ecosystem and its wildlife.",
]
INFRA_TITLES = [
    "New {project} planned through {site} buffer zone",
    "{project_cap} construction threatens wildlife corridor at {site}",
    "Approval of {project} near {site} alarms conservationists",
]
INFRA_SENTENCES = [
    "The proposed {project} would cut through a wildlife corridor used by {animal} herds.",
    "Construction of the {project} requires clearing forest inside the buffer zone.",
    "Environmental groups said the {project} approval ignored the impact on endangered wildlife.",
    "The government approved the {project} despite concerns about habitat fragmentation.",
]
BENIGN_TITLES = [
    "Tourists flock to {site} for holiday safaris",
    "Local festival celebrates spring near {site}",
    "New luxury resort opens outside {site}",
    "Village football tournament draws record crowds",
    "Photographers share scenic views from {site}",
    "Cooking class teaches visitors traditional recipes",
]
BENIGN_SENTENCES = [
    "Hotel owners said bookings were up this year as visitors returned for jungle safaris.",
    "The festival featured music, dance and food stalls run by local families.",
    "Guides offer elephant rides and canoe trips for tourists during the dry season.",
    "The tournament final was played in front of a cheerful crowd of supporters.",
    "Visitors praised the beautiful scenery and the friendly staff at the lodges.",
    "The new resort includes a spa, a swimming pool and a rooftop restaurant.",
    "Students enjoyed a cultural program with songs and traditional costumes.",
    "Many travellers hope to see a {animal} during their holiday trip.",
]
FILLER = [
    "The park covers a large area of grassland and forest.",
    "The area is home to many species of birds and mammals.",
    "Local communities live in villages along the park boundary.",
    "The region receives heavy rainfall during the monsoon months.",
]


def fill(template, site):
    project = rng.choice(PROJECTS)
    return template.format(site=SITES[site], animal=rng.choice(ANIMALS), project=project,
                           project_cap=project[0].upper() + project[1:])


def make_article(idx, kind, site, date, prefix="train"):
    if kind == "threat":
        titles, body = THREAT_TITLES, THREAT_SENTENCES
    elif kind == "infra":
        titles, body = INFRA_TITLES, INFRA_SENTENCES + THREAT_SENTENCES[:3]
    else:
        titles, body = BENIGN_TITLES, BENIGN_SENTENCES
    sentences = [fill(rng.choice(body), site) for _ in range(rng.randint(2, 4))]
    sentences += rng.sample(FILLER, rng.randint(0, 2))
    rng.shuffle(sentences)
    return {
        "id": f"{prefix}-{idx:04d}",
        "site_id": site,
        "title": fill(rng.choice(titles), site),
        "description": fill(rng.choice(body), site),
        "content": " ".join(sentences),
        "url": f"https://news.example.org/{prefix}/{idx:04d}",
        "source": rng.choice(["Himalayan Times", "Assam Tribune", "Delta Daily"]),
        "published_at": date,
        "language": "en",
    }


def training_corpus():
    articles, labels = [], []
    for i in range(400):
        r = rng.random()
        kind = "infra" if r < 0.12 else "threat" if r < 0.3 else "benign"
        site = rng.choice(sorted(SITES))
        day = 1 + i % 28
        a = make_article(i, kind, site, f"2022-{1 + i % 12:02d}-{day:02d}")
        articles.append(a)
        cons = 0 if kind == "benign" else 1
        infra = 1 if kind == "infra" else 0
        labels.append((a["id"], "gold", cons, infra if cons else "", 1))
    return articles, labels


def run_corpus():
    # 20 articles for the week ending 2023-03-06. Exactly three describe
    # threats: one at a gazetteer site, one whose site_id is unknown but whose
    # title names a gazetteer alias, and one that cannot be placed.
    plan = [
        ("benign", "chitwan", "2023-02-10"), ("benign", "chitwan", "2023-02-20"),
        ("benign", "kaziranga", "2023-02-21"), ("benign", "sundarbans", "2023-02-22"),
        ("benign", "bardia", "2023-02-24"), ("benign", "manas", "2023-02-25"),
        ("benign", "chitwan", "2023-02-27"), ("benign", "kaziranga", "2023-02-28"),
        ("threat", "chitwan", "2023-03-01"), ("benign", "sundarbans", "2023-03-01"),
        ("benign", "bardia", "2023-03-02"), ("benign", "manas", "2023-03-02"),
        ("infra", "kaziranga", "2023-03-03"), ("benign", "chitwan", "2023-03-03"),
        ("benign", "kaziranga", "2023-03-04"), ("benign", "sundarbans", "2023-03-04"),
        ("threat", "manas", "2023-03-05"), ("benign", "bardia", "2023-03-05"),
        ("benign", "manas", "2023-03-06"), ("benign", "chitwan", "2023-03-06"),
    ]
    out = []
    for i, (kind, site, date) in enumerate(plan):
        a = make_article(i, kind, site, date, prefix="week")
        out.append(a)
    # A tourism story from the same park that shares keywords with the
    # forest-fire report, so the weekly run has a non-trivial event.
    tour = out[6]
    tour["title"] = "Safari season opens at Chitwan National Park"
    tour["content"] = ("Guides at Chitwan National Park welcomed tourists back for the holiday season. "
                       "Visitors asked about last year's forest fire and the habitat of the rhino. "
                       "Hotel owners said bookings were up and the lodges were full.")
    # The infrastructure story reaches us through an unlisted local outlet.
    infra = out[12]
    infra["site_id"] = "assam-local"
    infra["title"] = "Highway expansion near KNP alarms conservationists"
    # The third threat carries no usable location.
    unplaced = out[16]
    unplaced["site_id"] = "unknown"
    unplaced["title"] = "Poachers kill rhino in remote border forest"
    unplaced["content"] = unplaced["content"].replace(SITES["manas"], "the border forest")
    unplaced["description"] = unplaced["description"].replace(SITES["manas"], "the border forest")
    return out


def main():
    articles, labels = training_corpus()
    with open(HERE / "train.jsonl", "w") as f:
        for a in articles:
            f.write(json.dumps(a) + "\n")
    with open(HERE / "train_labels.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["article_id", "annotator_id", "conservation_label", "infrastructure_label", "is_gold"])
        w.writerows(labels)
    with open(HERE / "run.jsonl", "w") as f:
        for a in run_corpus():
            f.write(json.dumps(a) + "\n")
    with open(HERE / "gazetteer.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["site_id", "canonical_name", "aliases", "lat", "lon"])
        w.writerow(["chitwan", SITES["chitwan"], "Chitwan", "27.5", "84.35"])
        w.writerow(["kaziranga", SITES["kaziranga"], "Kaziranga|KNP", "26.58", "93.17"])
        w.writerow(["sundarbans", SITES["sundarbans"], "Sundarbans", "21.95", "89.18"])
        w.writerow(["bardia", SITES["bardia"], "Bardia", "28.38", "81.5"])
        w.writerow(["manas", SITES["manas"], "Manas", "26.72", "90.95"])
    words = sorted({*ANIMALS, *PROJECTS, *(s.lower() for s in SITES.values()),
                    "poaching", "poachers", "illegal logging", "encroachment", "wildlife corridor",
                    "buffer zone", "habitat", "forest fire", "wildlife trafficking", "rangers",
                    "park authorities", "endangered species", "sand mining", "construction"})
    with open(HERE / "dictionary.txt", "w") as f:
        f.write("# Curated conservation keywords, one phrase per line.\n")
        f.write("\n".join(words) + "\n")


if __name__ == "__main__":
    main()
