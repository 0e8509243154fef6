use crate::common::suites::reward_cases::configs;
use crate::common::{label_pool, random_doc, random_shape, RandomDoc};
use geoformal::canon::{canonicalize, CanonMode, CanonicalDocument, Category};
use geoformal::metrics::{score_corpus, Aggregation, CorpusReport};
use geoformal::reward::total_reward;
use geoformal::{parse_document, Domain};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CORPORA: usize = 200;

fn canon(text: &str, domain: Domain) -> CanonicalDocument {
    canonicalize(&parse_document(text, domain).document, CanonMode::default())
}

fn domain_of(i: usize) -> Domain {
    if i.is_multiple_of(2) {
        Domain::Plane
    } else {
        Domain::Solid
    }
}

/// Every reference corpus scored against itself is perfect in every
/// reported figure, and every document rewards itself with exactly 1.
pub fn self_scoring() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let pool = label_pool(12);
    let configs = configs();
    let mut rewards = 0;
    for i in 0..CORPORA {
        let domain = domain_of(i);
        let n = rng.gen_range(1..=20);
        let docs: Vec<RandomDoc> = (0..n).map(|_| random_doc(&mut rng, domain, 15, &pool)).collect();
        let pairs: Vec<_> = docs
            .iter()
            .map(|d| {
                let c = canon(&d.text(), domain);
                (c.clone(), c)
            })
            .collect();
        for agg in [Aggregation::Micro, Aggregation::Macro] {
            let r: CorpusReport<f64> = score_corpus(domain, &pairs, agg).unwrap();
            for &c in Category::active(domain) {
                let prf = r.categories[c].unwrap();
                assert_eq!((prf.p, prf.r, prf.f1), (100.0, 100.0, 100.0), "{c:?}");
                assert_eq!(r.sample_accuracy[c].unwrap(), 100.0, "{c:?}");
            }
            assert_eq!(r.ppr, 100.0);
            assert_eq!(r.overall, 100.0);
            if domain == Domain::Solid {
                assert_eq!(r.solids_acc.unwrap(), 100.0);
            }
        }
        for d in &docs {
            let text = d.text();
            for (name, cfg) in &configs {
                let b = total_reward(&text, &text, domain, cfg).unwrap();
                assert_eq!(b.total, 1.0, "{name}: {text}");
                rewards += 1;
            }
        }
    }
    format!("{CORPORA} corpora perfect under micro and macro; {rewards} self-rewards equal 1.0")
}

/// Corrupting one primitive of one sample costs exactly one sample of PPR.
pub fn ppr_single_error() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let pool = label_pool(12);
    let fresh = label_pool(30);
    for i in 0..CORPORA {
        let domain = domain_of(i);
        let n = rng.gen_range(1..=40);
        let mut docs: Vec<RandomDoc> = Vec::new();
        while docs.len() < n {
            let d = random_doc(&mut rng, domain, 10, &pool);
            if !d.shapes.is_empty() {
                docs.push(d);
            }
        }
        let victim = rng.gen_range(0..n);
        let pairs: Vec<_> = docs
            .iter()
            .enumerate()
            .map(|(k, d)| {
                let mut pred = d.clone();
                if k == victim {
                    let j = rng.gen_range(0..pred.shapes.len());
                    let kind = pred.shapes[j].kind;
                    // labels disjoint from the pool guarantee a mismatch
                    pred.shapes[j] = random_shape(&mut rng, kind, &fresh[20..], 2);
                }
                (canon(&pred.text(), domain), canon(&d.text(), domain))
            })
            .collect();
        let r: CorpusReport<f64> = score_corpus(domain, &pairs, Aggregation::Micro).unwrap();
        let want = 100.0 * (n - 1) as f64 / n as f64;
        assert!((r.ppr - want).abs() <= 1e-9, "n={n}: {} != {want}", r.ppr);
        let shown = r.to_json()["ppr"].as_f64().unwrap();
        assert!((shown - want).abs() <= 0.05, "n={n}: shown {shown} != {want}");
    }
    format!("{CORPORA} corpora of 1..=40 samples lose exactly one sample")
}
