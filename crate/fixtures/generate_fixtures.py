#!/usr/bin/env python3
"""Regenerates the deterministic JSONL/HTML fixtures under fixtures/.

feed/monkeypox_feed.jsonl      56 English claims (1 rated true) plus non-English noise
feed/feed_unknown_label.jsonl  same feed with one record rated "satire"
articles/who_articles.jsonl    90 articles yielding 169 unique sentences scoring > 0.8

The scoring rule is mirrored here only to assert the target counts; the Rust
test-suite re-checks them against the real implementation.
"""

import json
import os
import random
import re

HERE = os.path.dirname(os.path.abspath(__file__))
rng = random.Random(20220805)

LEXICON = {
    "is", "are", "was", "were", "has", "have", "causes", "caused", "spreads",
    "spread", "infected", "confirmed", "reported", "declared", "found", "kills",
    "prevents", "transmits",
}


def score(sentence):
    pts = 30
    if any(c.isdigit() for c in sentence):
        pts += 25
    toks = sentence.split()
    if any(re.sub(r"[^0-9a-z]", "", t.lower()) in LEXICON for t in toks):
        pts += 20
    if 8 <= len(toks) <= 40:
        pts += 15
    if any(t[0].isupper() for t in toks[1:]):
        pts += 10
    return min(pts, 100)


def split(body):
    out, cur = [], ""
    for c in body:
        cur += c
        if c in ".?!":
            if cur.strip():
                out.append(cur.strip())
            cur = ""
    if cur.strip():
        out.append(cur.strip())
    return out


def norm(s):
    return " ".join(s.lower().split())


# ---------------------------------------------------------------- feed

FALSE_CLAIMS = [
    "Monkeypox is a side effect of the covid vaccine",
    "The monkeypox outbreak was planned by pharmaceutical companies",
    "Monkeypox only infects gay men",
    "Monkeypox is just shingles rebranded by the media",
    "A lab leak in Wuhan released monkeypox",
    "Monkeypox vaccines contain tracking microchips",
    "Monkeypox spreads through 5G towers",
    "The government invented monkeypox to force lockdowns",
    "Monkeypox is caused by the Pfizer vaccine",
    "Monkeypox pictures are actually photos of herpes",
    "The monkeypox emergency is a hoax to steal elections",
    "Bill Gates predicted monkeypox because he created it",
    "Monkeypox was engineered as a bioweapon",
    "Ivermectin cures monkeypox overnight",
    "Drinking bleach kills the monkeypox virus",
    "Monkeypox is spread by mosquitoes in Florida",
    "Monkeypox outbreak caused by AstraZeneca chimpanzee vaccine",
    "Children are being infected with monkeypox through school lunches",
    "Monkeypox shots cause magnetism in the arm",
    "The WHO admitted monkeypox is fake",
    "Monkeypox is a new form of AIDS",
    "Hospitals are paid to report fake monkeypox cases",
    "Monkeypox rash is a symptom of vaccine shedding",
    "Monkeypox can be caught from touching money",
    "Monkeypox was announced in a 2021 simulation so it is staged",
    "Monkeypox lesions are caused by radiation exposure",
    "Masks spread monkeypox rather than stopping it",
    "Monkeypox only exists in Africa and cannot reach America",
    "The monkeypox test always returns positive",
    "Monkeypox is transmitted by eating bananas",
    "Pets cannot ever get monkeypox so the warnings are propaganda",
    "Monkeypox is a scam invented to sell more vaccines",
    "A celebrity died of monkeypox last week",
    "Monkeypox vaccine alters your DNA permanently",
    "Monkeypox virus was patented years before the outbreak",
    "Monkeypox comes from contaminated tap water",
    "The outbreak is a cover story for vaccine injuries",
    "Monkeypox kills most people who catch it",
    "Only unvaccinated people get monkeypox",
    "The smallpox vaccine gives you monkeypox",
    "Monkeypox is airborne like measles and masks are useless",
    "Monkeypox cases were invented by the CDC for funding",
    "Garlic and vitamin pills cure monkeypox",
    "Monkeypox was released from a secret military lab",
    "Monkeypox outbreak staged to introduce digital IDs",
    "Doctors are hiding a cheap cure for monkeypox",
    "Monkeypox photos are digitally altered chickenpox images",
    "Monkeypox is punishment sent to certain communities",
    "The monkeypox virus cannot survive outside the body so it is harmless",
    "Monkeypox is spreading through swimming pools nationwide",
    "Condoms completely prevent monkeypox so nobody else is at risk",
    "Monkeypox came from a spliced monkey and human virus",
    "The monkeypox vaccine was rushed and never tested at all",
    "Monkeypox was predicted by a cartoon show",
    "Monkeypox spreads through social media screens",
]
assert len(FALSE_CLAIMS) == 55, len(FALSE_CLAIMS)

TRUE_CLAIM = "Monkeypox is caused by a virus related to smallpox"

# Every rating label appears, including sentence-length ratings that go through
# the alias table.
RATINGS = [
    "False", "Inaccurate", "Mostly False", "Misleading", "Incorrect",
    "Half True", "Not required", "Unsupported", "Needs Context", "No Evidence",
    "There is no evidence this is true. Monkeypox is caused by a virus.",
    "This claim is misleading. Monkeypox is not linked to vaccines.",
    "This is false. The outbreak was not planned.",
    "Missing context. Case counts were revised upward.",
    "Pants on Fire!",
]

SITES = ["politifact.com", "factcheck.org", "reuters.com", "apnews.com",
         "usatoday.com", "leadstories.com", "healthfeedback.org"]


def feed_record(text, rating, lang, i):
    site = rng.choice(SITES)
    return {
        "claim_text": text,
        "rating": rating,
        "language": lang,
        "source_url": f"https://social.example/post/{1000 + i}",
        "review_url": f"https://www.{site}/factchecks/2022/monkeypox-{i}",
    }


def build_feed(unknown=False):
    recs = []
    for i, text in enumerate(FALSE_CLAIMS):
        rating = RATINGS[i % len(RATINGS)]
        if unknown and i == 7:
            rating = "satire"
        recs.append(feed_record(text, rating, "en", i))
    recs.insert(23, feed_record(TRUE_CLAIM, "True", "en-US", 99))
    # noise: non-English records and a whitespace/case duplicate
    recs.insert(5, feed_record("La viruela del mono se transmite por el aire", "Falso", "es", 200))
    recs.insert(30, feed_record("A varíola dos macacos é uma farsa", "Falso", "pt-BR", 201))
    recs.insert(41, feed_record("Les vaccins causent la variole du singe", "Faux", "fr", 202))
    dup = FALSE_CLAIMS[3].upper().replace(" ", "  ")
    recs.append(feed_record(dup, "false", "en", 203))
    return recs


# ---------------------------------------------------------------- articles

COUNTRIES = ["Spain", "Germany", "Brazil", "Canada", "Peru", "Nigeria", "Portugal",
             "France", "Mexico", "Italy", "Belgium", "Ghana", "Chile", "Colombia",
             "Australia", "Israel", "Switzerland", "Austria", "Sweden", "Denmark"]
REGIONS = ["the European Region", "the Region of the Americas", "the African Region",
           "the Western Pacific Region", "the Eastern Mediterranean Region"]
MONTHS = ["January", "February", "March", "April", "May", "June", "July",
          "August", "September", "October", "November", "December"]

# qualifying templates: digit + lexicon verb + 8..40 tokens (>= 0.90)
QUALIFYING = [
    "As of {day} {month} 2022, {country} has reported {n} laboratory confirmed cases of monkeypox.",
    "A total of {n} cases were confirmed across {k} countries in {region} during week {w}.",
    "In {country}, {n} cases have been found among people who had no travel history in the past {k} days.",
    "Since 1 January 2022, {n} confirmed cases and {d} deaths were reported to WHO from {k} Member States.",
    "Monkeypox spreads through close contact, and {p} percent of reported cases in {region} involved household exposure.",
    "The incubation period of monkeypox is usually from {a} to {b} days but can range from 5 to 21 days.",
    "WHO declared the multi-country outbreak a public health emergency after {n} cases were reported in {k} countries.",
    "Vaccination with an approved vaccine prevents infection in about {p} percent of contacts when given within 4 days.",
    "Health workers infected in {country} were {k} out of {n} cases notified during the last {w} weeks.",
    "Of the {n} cases with known outcome in {region}, {d} were admitted to hospital for treatment.",
]

# non-qualifying sentences (all <= 0.80; some land exactly on 0.80)
FILLER = [
    "Wash your hands often with soap and water.",
    "Stay informed.",
    "Anyone can get monkeypox.",
    "The virus spreads through close contact with an infected person or contaminated materials.",
    "Symptoms usually last 2 to 4 weeks according to WHO guidance.",
    "People who develop a rash should contact a health worker for advice and testing.",
    "Read the full fact sheet for more information.",
    "Are you at risk?",
    "Learn more!",
    "Cases may occur among contacts of 3 people listed in Annex 1.",
    "Avoid skin to skin contact with anyone who has a rash.",
    "Monkeypox virus belongs to the orthopoxvirus genus in the family Poxviridae.",
]

WHO_BOILERPLATE = ("WHO has reported 16,016 cases of monkeypox from 75 countries "
                   "and territories in 2022.")


def fill(template):
    return template.format(
        day=rng.randint(1, 28), month=rng.choice(MONTHS), country=rng.choice(COUNTRIES),
        region=rng.choice(REGIONS), n=f"{rng.randint(12, 29000):,}", k=rng.randint(2, 90),
        w=rng.randint(18, 40), d=rng.randint(1, 9), p=rng.randint(10, 95),
        a=rng.randint(5, 7), b=rng.randint(13, 14),
    )


def build_articles():
    # 168 unique template sentences + 1 boilerplate repeated across many articles
    uniques, seen = [], {norm(WHO_BOILERPLATE)}
    while len(uniques) < 168:
        s = fill(rng.choice(QUALIFYING))
        if norm(s) in seen:
            continue
        assert score(s) > 80, (s, score(s))
        seen.add(norm(s))
        uniques.append(s)
    for f in FILLER:
        for sent in split(f):
            assert score(sent) <= 80, (sent, score(sent))
    assert any(score(f) == 80 for f in FILLER)

    articles = []
    idx = 0
    for a in range(90):
        take = 1 if a % 3 == 0 else 2
        if a in (5, 44, 71):
            take += 1
        if a == 89:
            take = 168 - idx
        body_sents = list(uniques[idx: idx + take])
        idx += take
        if a % 4 == 0:
            body_sents.append(WHO_BOILERPLATE)
        for _ in range(rng.randint(1, 3)):
            body_sents.insert(rng.randint(0, len(body_sents)), rng.choice(FILLER))
        country = rng.choice(COUNTRIES)
        articles.append({
            "url": f"https://www.who.int/emergencies/disease-outbreak-news/item/2022-DON{380 + a}",
            "title": f"Multi-country monkeypox outbreak update {a + 1}: {country}",
            "body": " ".join(body_sents),
        })
    assert idx == 168, idx

    kept, seen = 0, set()
    for art in articles:
        for s in split(art["body"]):
            if score(s) > 80 and norm(s) not in seen:
                seen.add(norm(s))
                kept += 1
    assert kept == 169, kept
    return articles


def write_jsonl(path, recs):
    with open(path, "w", encoding="utf-8") as fh:
        for r in recs:
            fh.write(json.dumps(r, ensure_ascii=False) + "\n")


def main():
    os.makedirs(os.path.join(HERE, "feed"), exist_ok=True)
    os.makedirs(os.path.join(HERE, "articles"), exist_ok=True)
    write_jsonl(os.path.join(HERE, "feed", "monkeypox_feed.jsonl"), build_feed())
    rng.seed(20220805)
    write_jsonl(os.path.join(HERE, "feed", "feed_unknown_label.jsonl"), build_feed(unknown=True))
    rng.seed(20220723)
    write_jsonl(os.path.join(HERE, "articles", "who_articles.jsonl"), build_articles())


if __name__ == "__main__":
    main()
