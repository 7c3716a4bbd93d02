#!/usr/bin/env python3
"""Writes the bundled schema.org subset used by tests and the default config."""
import json, sys

CLASSES = [
    ("Thing", [], "The most generic type of item."),
    ("CreativeWork", ["Thing"], "The most generic kind of creative work."),
    ("Article", ["CreativeWork"], "An article, such as a news article or piece of investigative report."),
    ("SocialMediaPosting", ["Article"], "A post to a social media platform."),
    ("BlogPosting", ["SocialMediaPosting"], "A blog post."),
    ("NewsArticle", ["Article"], "A news article."),
    ("WebPage", ["CreativeWork"], "A web page."),
    ("MediaObject", ["CreativeWork"], "A media object, such as an image, video, or audio object."),
    ("ImageObject", ["MediaObject"], "An image file."),
    ("HowTo", ["CreativeWork"], "Instructions that explain how to achieve a result."),
    ("Recipe", ["HowTo"], "A recipe."),
    ("Review", ["CreativeWork"], "A review of an item."),
    ("Course", ["CreativeWork"], "A description of an educational course."),
    ("Event", ["Thing"], "An event happening at a certain time and location."),
    ("SportsEvent", ["Event"], "Event type: Sports event."),
    ("Intangible", ["Thing"], "A utility class that serves as the umbrella for intangible things."),
    ("StructuredValue", ["Intangible"], "Structured values are used when the value of a property has a more complex structure."),
    ("ContactPoint", ["StructuredValue"], "A contact point."),
    ("PostalAddress", ["ContactPoint"], "The mailing address."),
    ("GeoCoordinates", ["StructuredValue"], "The geographic coordinates of a place or event."),
    ("PriceSpecification", ["StructuredValue"], "A structured value representing a price or price range."),
    ("Offer", ["Intangible"], "An offer to transfer some rights to an item or to provide a service."),
    ("Rating", ["Intangible"], "A rating is an evaluation on a numeric scale."),
    ("AggregateRating", ["Rating"], "The average rating based on multiple ratings or reviews."),
    ("Brand", ["Intangible"], "A brand is a name used by an organization or business person."),
    ("Language", ["Intangible"], "Natural languages such as Spanish, Tamil, Hindi, English, etc."),
    ("Service", ["Intangible"], "A service provided by an organization."),
    ("Organization", ["Thing"], "An organization such as a school, NGO, corporation, club, etc."),
    ("EducationalOrganization", ["Organization"], "An educational organization."),
    ("SportsOrganization", ["Organization"], "Represents the collection of all sports organizations."),
    ("SportsTeam", ["SportsOrganization"], "Organization: Sports team."),
    ("Person", ["Thing"], "A person (alive, dead, undead, or fictional)."),
    ("Place", ["Thing"], "Entities that have a somewhat fixed, physical extension."),
    ("CivicStructure", ["Place"], "A public structure, such as a town hall or concert hall."),
    ("TouristAttraction", ["Place"], "A tourist attraction."),
    ("LocalBusiness", ["Organization", "Place"], "A particular physical business or branch of an organization."),
    ("FoodEstablishment", ["LocalBusiness"], "A food-related business."),
    ("Restaurant", ["FoodEstablishment"], "A restaurant."),
    ("LodgingBusiness", ["LocalBusiness"], "A lodging business, such as a motel, hotel, or inn."),
    ("Hotel", ["LodgingBusiness"], "A hotel is an establishment that provides lodging paid on a short-term basis."),
    ("Hostel", ["LodgingBusiness"], "A hostel - cheap accommodation, often in shared dormitories."),
    ("Motel", ["LodgingBusiness"], "A motel."),
    ("BedAndBreakfast", ["LodgingBusiness"], "Bed and breakfast."),
    ("Resort", ["LodgingBusiness"], "A resort is a place used for relaxation or recreation."),
    ("Campground", ["CivicStructure", "LodgingBusiness"], "A camping site, campsite, or campground."),
    ("SportsActivityLocation", ["LocalBusiness"], "A sports location, such as a playing field."),
    ("SkiResort", ["SportsActivityLocation"], "A ski resort."),
    ("Product", ["Thing"], "Any offered product or service."),
]

T = "Text"; U = "URL"; N = "Number"; I = "Integer"; B = "Boolean"; D = "Date"; DT = "DateTime"; TM = "Time"

PROPS = [
    ("name", ["Thing"], [T], "The name of the item."),
    ("alternateName", ["Thing"], [T], "An alias for the item."),
    ("description", ["Thing"], [T], "A description of the item."),
    ("url", ["Thing"], [U], "URL of the item."),
    ("image", ["Thing"], [U, "ImageObject"], "An image of the item."),
    ("identifier", ["Thing"], [T, U], "An identifier of the item."),
    ("sameAs", ["Thing"], [U], "URL of a reference web page that unambiguously indicates the item's identity."),
    ("author", ["CreativeWork", "Rating"], ["Organization", "Person"], "The author of this content or rating."),
    ("headline", ["CreativeWork"], [T], "Headline of the article."),
    ("datePublished", ["CreativeWork"], [D], "Date of first broadcast/publication."),
    ("dateModified", ["CreativeWork"], [D, DT], "The date on which the CreativeWork was most recently modified."),
    ("inLanguage", ["CreativeWork", "Event"], [T, "Language"], "The language of the content or performance."),
    ("keywords", ["CreativeWork"], [T], "Keywords or tags used to describe this content."),
    ("publisher", ["CreativeWork"], ["Organization", "Person"], "The publisher of the creative work."),
    ("about", ["CreativeWork"], ["Thing"], "The subject matter of the content."),
    ("text", ["CreativeWork"], [T], "The textual content of this CreativeWork."),
    ("copyrightYear", ["CreativeWork"], [N], "The year during which the claimed copyright was first asserted."),
    ("offers", ["CreativeWork", "Event", "Product", "Service"], ["Offer"], "An offer to provide this item."),
    ("aggregateRating", ["CreativeWork", "Event", "Organization", "Place", "Product", "Service"], ["AggregateRating"], "The overall rating, based on a collection of reviews or ratings, of the item."),
    ("review", ["CreativeWork", "Event", "Organization", "Place", "Product", "Service"], ["Review"], "A review of the item."),
    ("articleBody", ["Article"], [T], "The actual body of the article."),
    ("articleSection", ["Article"], [T], "Articles may belong to one or more 'sections' in a magazine or newspaper."),
    ("wordCount", ["Article"], [I], "The number of words in the text of the Article."),
    ("breadcrumb", ["WebPage"], [T], "A set of links that can help a user understand and navigate a website hierarchy."),
    ("lastReviewed", ["WebPage"], [D], "Date on which the content on this web page was last reviewed."),
    ("contentUrl", ["MediaObject"], [U], "Actual bytes of the media object."),
    ("encodingFormat", ["MediaObject"], [T], "Media type typically expressed using a MIME format."),
    ("caption", ["ImageObject"], [T], "The caption for this object."),
    ("recipeYield", ["Recipe"], [T], "The quantity produced by the recipe."),
    ("recipeIngredient", ["Recipe"], [T], "A single ingredient used in the recipe."),
    ("recipeInstructions", ["Recipe"], [T], "A step in making the recipe."),
    ("recipeCategory", ["Recipe"], [T], "The category of the recipe."),
    ("reviewBody", ["Review"], [T], "The actual body of the review."),
    ("reviewRating", ["Review"], ["Rating"], "The rating given in this review."),
    ("itemReviewed", ["Review", "AggregateRating"], ["Thing"], "The item that is being reviewed/rated."),
    ("ratingValue", ["Rating"], [N, T], "The rating for the content."),
    ("bestRating", ["Rating"], [N, T], "The highest value allowed in this rating system."),
    ("worstRating", ["Rating"], [N, T], "The lowest value allowed in this rating system."),
    ("ratingCount", ["AggregateRating"], [I], "The count of total number of ratings."),
    ("reviewCount", ["AggregateRating"], [I], "The count of total number of reviews."),
    ("courseCode", ["Course"], [T], "The identifier for the Course used by the course provider."),
    ("coursePrerequisites", ["Course"], [T, "Course"], "Requirements for taking the Course."),
    ("provider", ["CreativeWork", "Service"], ["Organization", "Person"], "The service provider, service operator, or service performer."),
    ("startDate", ["Event"], [D, DT], "The start date and time of the item."),
    ("endDate", ["Event"], [D, DT], "The end date and time of the item."),
    ("location", ["Event"], ["Place", "PostalAddress", T], "The location of for example where the event is happening."),
    ("organizer", ["Event"], ["Organization", "Person"], "An organizer of an Event."),
    ("performer", ["Event"], ["Organization", "Person"], "A performer at the event."),
    ("address", ["Organization", "Person", "Place"], ["PostalAddress", T], "Physical address of the item."),
    ("telephone", ["ContactPoint", "Organization", "Person", "Place"], [T], "The telephone number."),
    ("email", ["ContactPoint", "Organization", "Person"], [T], "Email address."),
    ("faxNumber", ["ContactPoint", "Organization", "Person", "Place"], [T], "The fax number."),
    ("logo", ["Brand", "Organization", "Place", "Product", "Service"], [U, "ImageObject"], "An associated logo."),
    ("founder", ["Organization"], ["Person"], "A person who founded this organization."),
    ("foundingDate", ["Organization"], [D], "The date that this organization was founded."),
    ("legalName", ["Organization"], [T], "The official name of the organization."),
    ("member", ["Organization"], ["Organization", "Person"], "A member of an Organization."),
    ("contactPoint", ["Organization", "Person"], ["ContactPoint"], "A contact point for a person or organization."),
    ("brand", ["Organization", "Person", "Product", "Service"], ["Brand", "Organization"], "The brand(s) associated with a product or service."),
    ("makesOffer", ["Organization", "Person"], ["Offer"], "A pointer to products or services offered by the organization or person."),
    ("employee", ["Organization"], ["Person"], "Someone working for this organization."),
    ("alumni", ["EducationalOrganization"], ["Person"], "Alumni of an organization."),
    ("sport", ["SportsOrganization", "SportsEvent"], [T, U], "A type of sport (e.g. Baseball)."),
    ("athlete", ["SportsTeam"], ["Person"], "A person that acts as performing member of a sports team."),
    ("coach", ["SportsTeam"], ["Person"], "A person that acts in a coaching role for a sports team."),
    ("geo", ["Place"], ["GeoCoordinates"], "The geo coordinates of the place."),
    ("containedInPlace", ["Place"], ["Place"], "The basic containment relation between a place and one that contains it."),
    ("photo", ["Place"], ["ImageObject"], "A photograph of this place."),
    ("hasMap", ["Place"], [U], "A URL to a map of the place."),
    ("openingHours", ["CivicStructure", "LocalBusiness"], [T], "The general opening hours for a business."),
    ("priceRange", ["LocalBusiness"], [T], "The price range of the business, for example $$$."),
    ("currenciesAccepted", ["LocalBusiness"], [T], "The currency accepted."),
    ("paymentAccepted", ["LocalBusiness"], [T], "Cash, credit card, etc."),
    ("servesCuisine", ["FoodEstablishment"], [T], "The cuisine of the restaurant."),
    ("acceptsReservations", ["FoodEstablishment"], [B, T, U], "Indicates whether a FoodEstablishment accepts reservations."),
    ("checkinTime", ["LodgingBusiness"], [DT, TM], "The earliest someone may check into a lodging establishment."),
    ("checkoutTime", ["LodgingBusiness"], [DT, TM], "The latest someone may check out of a lodging establishment."),
    ("starRating", ["LodgingBusiness"], ["Rating"], "An official rating for a lodging business or food establishment."),
    ("petsAllowed", ["LodgingBusiness"], [B, T], "Indicates whether pets are allowed to enter the accommodation or lodging business."),
    ("availableLanguage", ["ContactPoint", "LodgingBusiness"], [T, "Language"], "A language someone may use with or at the item."),
    ("touristType", ["TouristAttraction"], [T], "Attraction suitable for type(s) of tourist."),
    ("streetAddress", ["PostalAddress"], [T], "The street address."),
    ("addressLocality", ["PostalAddress"], [T], "The locality in which the street address is."),
    ("addressRegion", ["PostalAddress"], [T], "The region in which the locality is."),
    ("postalCode", ["PostalAddress"], [T], "The postal code."),
    ("addressCountry", ["PostalAddress"], [T], "The country."),
    ("postOfficeBoxNumber", ["PostalAddress"], [T], "The post office box number for PO box addresses."),
    ("contactType", ["ContactPoint"], [T], "A person or organization can have different contact points."),
    ("latitude", ["GeoCoordinates"], [N, T], "The latitude of a location."),
    ("longitude", ["GeoCoordinates"], [N, T], "The longitude of a location."),
    ("elevation", ["GeoCoordinates"], [N, T], "The elevation of a location."),
    ("price", ["Offer", "PriceSpecification"], [N, T], "The offer price of a product."),
    ("priceCurrency", ["Offer", "PriceSpecification"], [T], "The currency of the price."),
    ("availability", ["Offer"], [U], "The availability of this item."),
    ("validFrom", ["Offer", "PriceSpecification"], [D, DT], "The date when the item becomes valid."),
    ("validThrough", ["Offer", "PriceSpecification"], [D, DT], "The date after when the item is not valid."),
    ("priceValidUntil", ["Offer"], [D], "The date after which the price is no longer available."),
    ("itemOffered", ["Offer"], ["Product", "Service"], "The item being offered."),
    ("seller", ["Offer"], ["Organization", "Person"], "An entity which offers the item."),
    ("category", ["Offer", "Product", "Service"], [T], "A category for the item."),
    ("priceSpecification", ["Offer"], ["PriceSpecification"], "One or more detailed price specifications."),
    ("minPrice", ["PriceSpecification"], [N], "The lowest price if the price is a range."),
    ("maxPrice", ["PriceSpecification"], [N], "The highest price if the price is a range."),
    ("givenName", ["Person"], [T], "Given name."),
    ("familyName", ["Person"], [T], "Family name."),
    ("jobTitle", ["Person"], [T], "The job title of the person."),
    ("birthDate", ["Person"], [D], "Date of birth."),
    ("affiliation", ["Person"], ["Organization"], "An organization that this person is affiliated with."),
    ("worksFor", ["Person"], ["Organization"], "Organizations that the person works for."),
    ("sku", ["Product"], [T], "The Stock Keeping Unit of a product."),
    ("model", ["Product"], [T], "The model of the product."),
    ("color", ["Product"], [T], "The color of the product."),
    ("serviceType", ["Service"], [T], "The type of service being offered."),
    ("areaServed", ["Organization", "Service"], ["Place", T], "The geographic area where a service or offered item is provided."),
    ("slogan", ["Brand", "Organization", "Place", "Product", "Service"], [T], "A slogan or motto associated with the item."),
]

doc = {
    "version": "3.4.0",
    "classes": [{"name": n, "parents": p, "description": d} for n, p, d in CLASSES],
    "properties": [{"name": n, "domains": dm, "ranges": r, "description": d} for n, dm, r, d in PROPS],
}
json.dump(doc, sys.stdout, indent=2)
sys.stdout.write("\n")
