#!/usr/bin/env python3
"""Writes the synthetic ski-school corpus: 64 annotation files, 5312 statements in total."""
import json, os, random, glob

OUT = os.path.join(os.path.dirname(__file__), "..", "crates", "testbed", "fixtures", "ski-school")
FILES, TOTAL = 64, 5312
rng = random.Random(2017)
CTX = "http://schema.org"
BASE = "https://skischool.example"

def count(node):
    n = 1
    for k, v in node.items():
        if k.startswith("@"):
            continue
        for item in (v if isinstance(v, list) else [v]):
            n += 1 + (count(item) - 0 if isinstance(item, dict) else 0)
    return n

def person(i):
    return {"@type": "Person", "name": f"Instructor {i}", "jobTitle": rng.choice(["Ski instructor", "Snowboard instructor", "Guide"]),
            "telephone": f"+43 5285 {6000 + i}"}

def offer(name, price):
    return {"@type": "Offer", "name": name, "price": price, "priceCurrency": "EUR",
            "validFrom": "2017-12-01", "availability": "https://schema.org/InStock"}

def place(name):
    return {"@type": "Place", "name": name,
            "address": {"@type": "PostalAddress", "streetAddress": "Zillergrund 1", "addressLocality": "Mayrhofen", "postalCode": "6290"},
            "geo": {"@type": "GeoCoordinates", "latitude": round(47.16 + rng.random() / 100, 5), "longitude": round(11.86 + rng.random() / 100, 5)}}

def school():
    return {"@context": CTX, "@type": "SportsActivityLocation", "name": "Ski School Example", "url": BASE + "/",
            "telephone": "+43 5285 6000", "priceRange": "EUR 45-420", "currenciesAccepted": "EUR",
            "openingHours": ["Mo-Su 08:30-16:30"],
            "address": {"@type": "PostalAddress", "streetAddress": "Zillergrund 1", "addressLocality": "Mayrhofen", "postalCode": "6290", "addressCountry": "AT"},
            "geo": {"@type": "GeoCoordinates", "latitude": 47.1667, "longitude": 11.8667},
            "employee": [person(i) for i in range(24)],
            "makesOffer": [offer(f"Private lesson {h} h", 60 * h) for h in range(1, 7)]}

def course(i):
    level = rng.choice(["Beginner", "Intermediate", "Advanced", "Kids", "Freeride"])
    return {"@context": CTX, "@type": "Course", "name": f"{level} course {i}", "url": f"{BASE}/courses/{i}",
            "description": f"{level} group course, five half days.", "courseCode": f"SK-{i:03d}", "inLanguage": rng.choice(["de", "en", "nl"]),
            "coursePrerequisites": "none" if level in ("Beginner", "Kids") else "parallel turns",
            "offers": [offer(f"{d} days", 150 + 40 * d) for d in range(1, rng.randint(8, 16))]}

def event(i):
    e = {"@context": CTX, "@type": "SportsEvent", "name": f"Race day {i}", "url": f"{BASE}/events/{i}",
         "startDate": f"2018-0{rng.randint(1, 3)}-{rng.randint(10, 28)}T09:00:00Z", "endDate": "2018-03-31T16:00:00Z",
         "location": place(f"Slope {i}"), "organizer": {"@type": "Organization", "name": "Ski School Example", "url": BASE + "/"},
         "performer": [person(100 + i * 10 + k) for k in range(rng.randint(4, 10))],
         "offers": [offer("Entry", 25), offer("Entry with lunch", 39)]}
    return e

docs = [("00-school", school())]
while len(docs) < FILES - 1:
    i = len(docs)
    if i % 3 == 0:
        docs.append((f"{i:02d}-event", event(i)))
    else:
        docs.append((f"{i:02d}-course", course(i)))

so_far = sum(count(d) for _, d in docs)
last = {"@context": CTX, "@type": "LocalBusiness", "name": "Ski School Example rental desk", "url": BASE + "/rental",
        "address": {"@type": "PostalAddress", "streetAddress": "Hauptstrasse 4", "addressLocality": "Mayrhofen"}}
need = TOTAL - so_far
assert need > count(last), (so_far, need)
# each makesOffer item below adds 1 (link) + 5 (offer with four properties) statements
base_offers = []
while count(last) + (sum(6 for _ in base_offers)) + 6 <= need and len(base_offers) < 20:
    base_offers.append(len(base_offers))
last["makesOffer"] = [{"@type": "Offer", "name": f"Rental {k}", "price": 20 + k, "priceCurrency": "EUR"} for k in base_offers]
pad = need - count(last)
assert pad >= 0, pad
if pad:
    last["telephone"] = [f"+43 5285 70{k:02d}" for k in range(pad)]
docs.append((f"{FILES - 1:02d}-rental", last))

assert len(docs) == FILES
assert sum(count(d) for _, d in docs) == TOTAL
for f in glob.glob(os.path.join(OUT, "*.json")):
    os.remove(f)
for name, d in docs:
    with open(os.path.join(OUT, name + ".json"), "w") as fh:
        json.dump(d, fh, indent=2, ensure_ascii=False)
        fh.write("\n")
print(FILES, "files,", TOTAL, "statements; last file", count(last))
