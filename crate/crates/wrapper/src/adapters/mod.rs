pub mod page_scrape;
pub mod structured_feed;

pub use page_scrape::PageScrape;
pub use structured_feed::{StructuredFeed, TypeTable};
