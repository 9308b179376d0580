use egocircles::egonet::build_ego_network;
use egocircles::mobility::{author_mobility, haversine_km, Location, MobilityConfig};
use egocircles::{
    AffiliationRecord, Authorship, CareerStage, Corpus, EgoConfig, LocationRegistry,
    MigrationStatus, Publication,
};

fn paper(id: &str, date: &str, cites: u64, authors: &[(&str, Option<&str>)]) -> Publication {
    Publication {
        paper_id: id.into(),
        date: date.parse().unwrap(),
        citations: Some(cites),
        authors: authors
            .iter()
            .map(|(a, inst)| {
                let aff = inst.map(|i| {
                    let cc = &i[..2];
                    AffiliationRecord::located(i, Some(&format!("{cc}-city")), Some(cc))
                });
                Authorship::new(*a, aff)
            })
            .collect(),
    }
}

fn corpus() -> Corpus {
    let pi = Some("IT-PISA");
    let be = Some("DE-BERLIN");
    Corpus::from_publications(vec![
        paper("p1", "2010-01", 10, &[("e", pi), ("a", None)]),
        paper("p2", "2012-01", 4, &[("e", pi), ("a", None), ("b", None)]),
        paper("p3", "2016-01", 3, &[("e", be), ("b", None), ("c", None), ("d", None)]),
        paper("p4", "2019-09", 0, &[("e", be), ("f", None)]),
        paper("p5", "2020-01", 1, &[("e", be)]),
    ])
    .unwrap()
}

#[test]
fn profile_of_ego() {
    let c = corpus();
    let e = c.author("e").unwrap();
    assert_eq!(e.productivity, 5);
    assert_eq!(e.h_index, 3);
    assert_eq!(e.career_length_years, 10.0);
    assert_eq!(e.career_stage, CareerStage::AssocProf);
}

#[test]
fn ties_and_rings() {
    let net = build_ego_network(&corpus(), "e", &EgoConfig::default()).unwrap();
    // f shares a single paper four months before the ego's last one
    let got: Vec<(&str, f64)> = net.ties.iter().map(|t| (t.alter_id.as_str(), t.strength)).collect();
    let want = [
        ("a", (1.0 + 0.5) / 10.0),
        ("b", (0.5 + 1.0 / 3.0) / 8.0),
        ("c", (1.0 / 3.0) / 4.0),
        ("d", (1.0 / 3.0) / 4.0),
    ];
    assert_eq!(got.len(), want.len());
    for (alter, s) in want {
        let t = got.iter().find(|(a, _)| *a == alter).unwrap();
        assert!((t.1 - s).abs() < 1e-12, "{alter}: {} vs {s}", t.1);
    }
    assert!(!net.complete);
    let ring = |id: &str| net.ties.iter().find(|t| t.alter_id == id).unwrap().ring;
    assert!(ring("a") < ring("b") && ring("b") < ring("c"));
    assert_eq!(ring("c"), ring("d"));
}

#[test]
fn one_international_move() {
    let mut reg = LocationRegistry::new();
    let loc = |lat, lon, city: &str, cc: &str| Location {
        lat,
        lon,
        city: Some(city.into()),
        country: Some(cc.into()),
    };
    reg.insert("IT-PISA", loc(43.7167, 10.4, "IT-city", "IT")).unwrap();
    reg.insert("DE-BERLIN", loc(52.52, 13.405, "DE-city", "DE")).unwrap();

    let (_, moves, profile) = author_mobility(&corpus(), "e", &reg, &MobilityConfig::default()).unwrap();
    assert_eq!(moves.len(), 1);
    let m = &moves[0];
    assert_eq!(m.at, "2016-01".parse().unwrap());
    assert!(m.cross_country);
    let d = m.distance_km.unwrap();
    assert!((d - haversine_km(43.7167, 10.4, 52.52, 13.405)).abs() < 1e-9);
    assert!((990.0..1010.0).contains(&d), "{d}");
    assert_eq!(profile.n_countries, 2);
    assert_eq!(profile.migration_status, MigrationStatus::International);
}
