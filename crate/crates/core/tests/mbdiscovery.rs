use faircfs::data::Dataset;
use faircfs::graph::{true_mb, BayesNet};
use faircfs::mbdiscovery::{get_mb, get_mb_by_name, hiton_mb, iamb, MbAlgorithm, MbConfig};

const N: usize = 20_000;

fn cfg(algorithm: MbAlgorithm) -> MbConfig {
    MbConfig {
        algorithm,
        ..MbConfig::default()
    }
}

fn both() -> [MbConfig; 2] {
    [cfg(MbAlgorithm::Iamb), cfg(MbAlgorithm::HitonMb)]
}

fn chain() -> BayesNet {
    BayesNet::parse(
        "A 2 : 0.5 0.5\n\
         B 2 A : 0.8 0.2  0.2 0.8\n\
         C 2 B : 0.75 0.25  0.25 0.75\n",
    )
    .unwrap()
}

fn collider() -> BayesNet {
    BayesNet::parse(
        "A 2 : 0.5 0.5\n\
         C 2 : 0.5 0.5\n\
         B 2 A C : 0.9 0.1  0.5 0.5  0.5 0.5  0.1 0.9\n",
    )
    .unwrap()
}

#[test]
fn chain_middle_node_has_both_neighbours() {
    let bn = chain();
    let d = bn.sample(N, 7, 0, 2).unwrap();
    assert_eq!(true_mb(bn.dag(), 1).unwrap(), vec![0, 2]);
    for c in both() {
        assert_eq!(get_mb(&d, 1, &c).unwrap().blanket, vec![0, 2], "{}", c.algorithm);
    }
}

#[test]
fn collider_spouse_is_recovered() {
    let bn = collider();
    let d = bn.sample(N, 11, 0, 2).unwrap();
    let (a, c, b) = (0, 1, 2);
    assert_eq!(true_mb(bn.dag(), a).unwrap(), vec![c, b]);
    for cfg in both() {
        let mut found = get_mb(&d, a, &cfg).unwrap().blanket;
        found.sort_unstable();
        assert_eq!(found, vec![c, b], "{}", cfg.algorithm);
    }
}

#[test]
fn independent_coins_give_mostly_empty_blankets() {
    let text: String = (0..6).map(|i| format!("C{i} 2 : 0.5 0.5\n")).collect();
    let bn = BayesNet::parse(&text).unwrap();
    for c in both() {
        let empty = (0..20)
            .filter(|&seed| {
                let d = bn.sample(5_000, seed, 1, 2).unwrap();
                get_mb(&d, 0, &c).unwrap().blanket.is_empty()
            })
            .count();
        assert!(empty >= 16, "{}: only {empty}/20 empty", c.algorithm);
    }
}

#[test]
fn duplicated_target_absorbs_the_blanket() {
    let d = chain().sample(N, 3, 0, 2).unwrap();
    let mut columns: Vec<Vec<u32>> = (0..3).map(|j| d.column(j).to_vec()).collect();
    columns.push(d.column(1).to_vec());
    let names = ["A", "B", "C", "B2"].map(String::from).to_vec();
    let d = Dataset::from_codes(names, columns, vec![2; 4], 0, 2).unwrap();
    for c in both() {
        assert_eq!(get_mb(&d, 1, &c).unwrap().blanket, vec![3], "{}", c.algorithm);
    }
}

#[test]
fn dispatch_matches_direct_calls() {
    let d = collider().sample(5_000, 5, 0, 2).unwrap();
    for target in 0..3 {
        assert_eq!(
            get_mb(&d, target, &cfg(MbAlgorithm::Iamb)).unwrap(),
            iamb(&d, target, &cfg(MbAlgorithm::Iamb)).unwrap()
        );
        assert_eq!(
            get_mb(&d, target, &cfg(MbAlgorithm::HitonMb)).unwrap(),
            hiton_mb(&d, target, &cfg(MbAlgorithm::HitonMb)).unwrap()
        );
        assert_eq!(
            get_mb_by_name(&d, target, "iamb", &MbConfig::default()).unwrap().algorithm,
            MbAlgorithm::Iamb
        );
    }
}

#[test]
fn bad_target_and_unknown_algorithm_are_errors() {
    let d = chain().sample(500, 1, 0, 2).unwrap();
    for c in both() {
        assert!(get_mb(&d, 3, &c).is_err());
    }
    assert!(get_mb_by_name(&d, 0, "pcmb", &MbConfig::default()).is_err());
}

#[test]
fn results_are_deterministic() {
    let d = collider().sample(5_000, 9, 0, 2).unwrap();
    for c in both() {
        assert_eq!(get_mb(&d, 0, &c).unwrap(), get_mb(&d, 0, &c).unwrap());
    }
}
