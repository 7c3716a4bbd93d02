use std::path::Path;
use std::process::{Command, Output};

use semantify_core::parse_annotation;
use semantify_injector::{fetch_annotation, inject, FetchError, InjectionSpec};
use semantify_testbed::{spawn_server, tenant, TestServer};

const PAGE: &str = "<!doctype html><html><head><title>p1</title></head><body><p>hello</p></body></html>";

struct World {
    server: TestServer,
    api_key: String,
    hash: String,
    canonical: String,
    other_hash: String,
}

fn world() -> World {
    let server = spawn_server();
    let t = tenant(&server.state, "Inject Test");
    let doc = parse_annotation(r#"{"@context":"http://schema.org","@type":"Article","headline":"P1 </script>","url":"https://ex.org/p1"}"#).unwrap();
    let canonical = doc.canonical().to_string();
    let hash = server.store().put_annotation(&t.site.website_id, doc, Some("p1-en")).unwrap().hash;
    let other = parse_annotation(r#"{"@context":"http://schema.org","@type":"Hotel","name":"H"}"#).unwrap();
    let other_hash = server.store().put_annotation(&t.site.website_id, other, None).unwrap().hash;
    World {
        server,
        api_key: t.site.api_key,
        hash,
        canonical,
        other_hash,
    }
}

fn inject_cmd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_inject"))
        .args(args)
        .env_remove("SEMANTIFY_ENDPOINT")
        .env_remove("SEMANTIFY_API_KEY")
        .output()
        .unwrap()
}

fn write_page(dir: &Path, html: &str) -> String {
    let p = dir.join("page.html");
    std::fs::write(&p, html).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn library_lookups_agree() {
    let w = world();
    let base = w.server.base_url();
    let by_hash = fetch_annotation(&InjectionSpec::by_hash(base, &w.hash)).unwrap();
    assert_eq!(String::from_utf8(by_hash.clone()).unwrap(), w.canonical);
    assert_eq!(fetch_annotation(&InjectionSpec::by_page_url(base, "https://ex.org/p1", &w.api_key)).unwrap(), by_hash);
    assert_eq!(fetch_annotation(&InjectionSpec::by_cid(base, "p1-en", &w.api_key)).unwrap(), by_hash);
    let direct = reqwest::blocking::get(format!("{base}/url/https%3A%2F%2Fex.org%2Fp1?key={}", w.api_key)).unwrap().bytes().unwrap();
    assert_eq!(direct.to_vec(), by_hash);

    assert!(matches!(fetch_annotation(&InjectionSpec::by_page_url(base, "https://ex.org/none", &w.api_key)), Err(FetchError::NotFound)));
    assert!(matches!(fetch_annotation(&InjectionSpec::by_hash(base, "zzzzzzzzz")), Err(FetchError::NotFound)));
    assert!(matches!(fetch_annotation(&InjectionSpec::by_cid(base, "p1-en", "wrong-key")), Err(FetchError::Unauthorized(_))));

    // Graceful degradation: a miss leaves the page as it was.
    let page = match fetch_annotation(&InjectionSpec::by_hash(base, "zzzzzzzzz")) {
        Ok(a) => inject(PAGE.as_bytes(), &a).unwrap(),
        Err(_) => PAGE.as_bytes().to_vec(),
    };
    assert_eq!(page, PAGE.as_bytes());
}

#[test]
fn stdout_without_input_prints_bare_tag() {
    let w = world();
    let out = inject_cmd(&["--endpoint", w.server.base_url(), "--hash", &w.other_hash, "--stdout"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with(r#"<script type="application/ld+json">{"@context""#));
    assert!(text.ends_with("</script>\n"));
}

#[test]
fn page_url_lookup_writes_injected_file() {
    let w = world();
    let dir = tempfile::tempdir().unwrap();
    let input = write_page(dir.path(), PAGE);
    let output = dir.path().join("page.out.html");
    let out = inject_cmd(&[
        "--endpoint",
        w.server.base_url(),
        "--page-url",
        "https://ex.org/p1",
        "--key",
        &w.api_key,
        "--in",
        &input,
        "--out",
        output.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let written = std::fs::read(&output).unwrap();
    assert_eq!(written, inject(PAGE.as_bytes(), w.canonical.as_bytes()).unwrap());
    assert!(!String::from_utf8(written).unwrap().contains("P1 </script>"));

    let by_cid = Command::new(env!("CARGO_BIN_EXE_inject"))
        .args(["--cid", "p1-en", "--in", &input, "--stdout"])
        .env("SEMANTIFY_ENDPOINT", w.server.base_url())
        .env("SEMANTIFY_API_KEY", &w.api_key)
        .output()
        .unwrap();
    assert_eq!(by_cid.status.code(), Some(0));
    assert_eq!(by_cid.stdout, std::fs::read(&output).unwrap());
}

#[test]
fn exit_codes() {
    let w = world();
    let base = w.server.base_url();
    let dir = tempfile::tempdir().unwrap();
    let input = write_page(dir.path(), PAGE);
    let output = dir.path().join("out.html");
    let out_s = output.to_str().unwrap();

    let missing = inject_cmd(&["--endpoint", base, "--hash", "zzzzzzzzz", "--in", &input, "--out", out_s]);
    assert_eq!(missing.status.code(), Some(4));
    assert!(!missing.stderr.is_empty());
    assert!(!output.exists(), "no output file on a miss");

    assert_eq!(inject_cmd(&["--endpoint", base]).status.code(), Some(2), "no lookup");
    assert_eq!(inject_cmd(&["--endpoint", base, "--hash", "a", "--cid", "b"]).status.code(), Some(2), "two lookups");
    assert_eq!(inject_cmd(&["--endpoint", base, "--cid", "p1-en"]).status.code(), Some(2), "cid without key");
    assert_eq!(inject_cmd(&["--endpoint", base, "--hash", &w.hash, "--in", "/nonexistent/x.html"]).status.code(), Some(2));

    let closed = std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap();
    let down = inject_cmd(&["--endpoint", &format!("http://{closed}"), "--hash", &w.hash, "--stdout"]);
    assert_eq!(down.status.code(), Some(3));
    assert_eq!(inject_cmd(&["--endpoint", base, "--cid", "p1-en", "--key", "nope", "--stdout"]).status.code(), Some(3));

    let headless = write_page(dir.path(), "<p>no head here</p>");
    let res = inject_cmd(&["--endpoint", base, "--hash", &w.hash, "--in", &headless, "--out", out_s]);
    assert_eq!(res.status.code(), Some(5));
    assert_eq!(std::fs::read_to_string(&output).unwrap(), "<p>no head here</p>");
}

#[test]
fn cache_serves_within_ttl() {
    let w = world();
    let base = w.server.base_url().to_string();
    let cache = tempfile::tempdir().unwrap();
    let args = ["--endpoint", &base, "--hash", &w.other_hash, "--stdout", "--cache-ttl", "3600", "--cache-dir", cache.path().to_str().unwrap()];
    let first = inject_cmd(&args);
    assert_eq!(first.status.code(), Some(0));
    w.server.store().delete_annotation(&w.other_hash).unwrap();
    let second = inject_cmd(&args);
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let uncached = inject_cmd(&["--endpoint", &base, "--hash", &w.other_hash, "--stdout"]);
    assert_eq!(uncached.status.code(), Some(4));
}
