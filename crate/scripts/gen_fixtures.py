#!/usr/bin/env python3
"""Writes the bundled domain specifications (crates/core/data/ds) and the violation fixtures."""
import json, copy, os

CORE = os.path.join(os.path.dirname(__file__), "..", "crates", "core")
OUT = os.path.join(CORE, "fixtures")
DS_OUT = os.path.join(CORE, "data", "ds")

def prim(p): return {"kind": "primitive", "primitive": p}
def nested(t, cs): return {"kind": "nestedType", "nestedType": {"type": t, "constraints": cs}}
def c(prop, ranges, required=False, many=False):
    return {"property": prop, "required": required, "multiplicity": "many" if many else "single", "ranges": ranges}

lodging = {
    "dsId": "lodging-business", "name": "Lodging business", "targetType": "LodgingBusiness", "version": 1,
    "constraints": [
        c("name", [prim("Text")], required=True),
        c("description", [prim("Text")]),
        c("url", [prim("URL")]),
        c("address", [nested("PostalAddress", [
            c("streetAddress", [prim("Text")], required=True),
            c("addressLocality", [prim("Text")], required=True),
            c("postalCode", [prim("Text")]),
            c("addressCountry", [prim("Text")]),
        ])], required=True),
        c("geo", [nested("GeoCoordinates", [
            c("latitude", [prim("Number")], required=True),
            c("longitude", [prim("Number")], required=True),
        ])]),
        c("makesOffer", [nested("Offer", [
            c("name", [prim("Text")], required=True),
            c("price", [prim("Number")], required=True),
            c("priceCurrency", [prim("Text")], required=True),
        ])], many=True),
        c("telephone", [prim("Text")], many=True),
        c("petsAllowed", [prim("Boolean")]),
        c("checkinTime", [prim("Time"), prim("DateTime")]),
        c("starRating", [nested("Rating", [c("ratingValue", [prim("Number")], required=True)])]),
        c("image", [prim("URL"), nested("ImageObject", [c("contentUrl", [prim("URL")], required=True)])]),
    ],
}

article = {
    "dsId": "article", "name": "Article", "targetType": "Article", "version": 1,
    "constraints": [
        c("headline", [prim("Text")], required=True),
        c("url", [prim("URL")], required=True),
        c("description", [prim("Text")]),
        c("author", [nested("Person", [c("name", [prim("Text")], required=True)]),
                     nested("Organization", [c("name", [prim("Text")], required=True)])], many=True),
        c("datePublished", [prim("Date")]),
        c("publisher", [nested("Organization", [c("name", [prim("Text")], required=True)])]),
        c("wordCount", [prim("Integer")]),
    ],
}

CTX = "http://schema.org"
base_hotel = {"@context": CTX, "@type": "Hotel", "name": "Alp Inn",
              "address": {"@type": "PostalAddress", "streetAddress": "Dorfstr. 1", "addressLocality": "Mayrhofen"}}
base_article = {"@context": CTX, "@type": "Article", "headline": "Opening day", "url": "https://blog.example/opening"}

def offer(name="Double room", price=120, cur="EUR"):
    return {"@type": "Offer", "name": name, "price": price, "priceCurrency": cur}

def edit(base, **kv):
    d = copy.deepcopy(base)
    for k, v in kv.items():
        if v is None:
            d.pop(k, None)
        else:
            d[k] = v
    return d

cases = []
def case(name, ds, doc, expected):
    cases.append({"name": name, "ds": ds, "document": doc, "expected": [list(e) for e in expected]})

case("valid lodging baseline", "lodging-business", base_hotel, [])
case("missing name", "lodging-business", edit(base_hotel, name=None), [("name", "MissingRequired")])
case("missing address", "lodging-business", edit(base_hotel, address=None), [("address", "MissingRequired")])
case("missing nested street", "lodging-business",
     edit(base_hotel, address={"@type": "PostalAddress", "addressLocality": "Mayrhofen"}),
     [("address.streetAddress", "MissingRequired")])
case("two names", "lodging-business", edit(base_hotel, name=["Alp Inn", "Alpengasthof"]), [("name", "CardinalityExceeded")])
case("property outside the ds", "lodging-business", edit(base_hotel, faxNumber="+43 1"), [("faxNumber", "UnknownProperty")])
case("numeric name", "lodging-business", edit(base_hotel, name=42), [("name", "TypeMismatch")])
case("address as plain text", "lodging-business", edit(base_hotel, address="Dorfstr. 1"), [("address", "WrongRangeKind")])
case("address of the wrong type", "lodging-business",
     edit(base_hotel, address={"@type": "GeoCoordinates", "latitude": 47.1, "longitude": 11.8}),
     [("address", "WrongNestedType")])
case("root type outside the ds", "lodging-business", edit(base_hotel, **{"@type": "Person"}), [("@type", "TypeMismatch")])
case("offer price as string", "lodging-business",
     edit(base_hotel, makesOffer=[offer(), offer(price="12"), offer()]), [("makesOffer[1].price", "TypeMismatch")])
case("offer missing currency and extra key", "lodging-business",
     edit(base_hotel, makesOffer=[edit(offer(), priceCurrency=None), offer(), edit(offer(), x=1)]),
     [("makesOffer[0].priceCurrency", "MissingRequired"), ("makesOffer[2].x", "UnknownProperty")])
case("broken coordinates", "lodging-business",
     edit(base_hotel, geo={"@type": "GeoCoordinates", "longitude": "abc"}),
     [("geo.latitude", "MissingRequired"), ("geo.longitude", "TypeMismatch")])
case("unparseable check-in time", "lodging-business", edit(base_hotel, checkinTime="14 o'clock"), [("checkinTime", "TypeMismatch")])
case("relative url", "lodging-business", edit(base_hotel, url="www.alpinn.example"), [("url", "TypeMismatch")])
case("rating as number", "lodging-business", edit(base_hotel, starRating=4), [("starRating", "WrongRangeKind")])
case("image object without content url", "lodging-business",
     edit(base_hotel, image={"@type": "ImageObject", "caption": "front"}),
     [("image.contentUrl", "MissingRequired"), ("image.caption", "UnknownProperty")])
case("several problems at once", "lodging-business",
     edit(base_hotel, name=None, email="a@b.c", address={"@type": "Person", "name": "x"}),
     [("name", "MissingRequired"), ("email", "UnknownProperty"), ("address", "WrongNestedType")])
case("author of the wrong type", "article",
     edit(base_article, author={"@type": "Thing", "name": "x"}), [("author", "WrongNestedType")])
case("fractional word count and bad date", "article",
     edit(base_article, wordCount=12.5, datePublished="30.06.2017"),
     [("datePublished", "TypeMismatch"), ("wordCount", "TypeMismatch")])
case("missing headline and url, publisher extra", "article",
     edit(base_article, headline=None, url=None, publisher={"@type": "Organization", "name": "P", "email": "p@x"}),
     [("headline", "MissingRequired"), ("url", "MissingRequired"), ("publisher.email", "UnknownProperty")])

assert len([x for x in cases if x["expected"]]) == 20, len(cases)
with open(os.path.join(DS_OUT, "lodging-business.json"), "w") as f:
    json.dump(lodging, f, indent=2); f.write("\n")
with open(os.path.join(DS_OUT, "article.json"), "w") as f:
    json.dump(article, f, indent=2); f.write("\n")
with open(os.path.join(OUT, "violations.json"), "w") as f:
    json.dump(cases, f, indent=2, ensure_ascii=False); f.write("\n")
print(len(cases), "cases")
