use degchain::chains::ChainKind;
use degchain::exact::*;
use degchain::graph::{is_connected, triangle_count, BinaryMatrix, DegreeSequence, GraphKind};
use num_bigint::BigInt;
use num_rational::BigRational;

fn k2222() -> StateSpace {
    enumerate(&DegreeSequence::bipartite(vec![2; 4], vec![2; 4]).unwrap(), DEFAULT_STATE_CAP).unwrap()
}

fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, t| acc * (n - t) / (t + 1))
}

#[test]
fn four_by_four_twos() {
    let space = k2222();
    let part = iso_partition(&space).unwrap();
    assert_eq!(part.class_sizes(), &[18, 72]);
    // the smaller class is the disconnected one
    assert!(!is_connected(space.state(part.representatives()[0]), GraphKind::Bipartite));
    assert!(is_connected(space.state(part.representatives()[1]), GraphKind::Bipartite));

    let p = switch_matrix(&space).unwrap();
    let pi = stationary(&p, None).unwrap();
    assert_eq!(pi, Distribution::uniform(90));
    let q = project(&p, &part).unwrap();
    let pi_bar = stationary(&q, Some(&part)).unwrap();
    assert!((pi_bar.weights()[0] - 0.2).abs() < 1e-12 && (pi_bar.weights()[1] - 0.8).abs() < 1e-12);

    let tau = mixing_time(&p, &pi, 0.001).unwrap();
    let tau_bar = mixing_time(&q, &pi_bar, 0.001).unwrap();
    let tau_hat = mixing_time_lifted(&p, &part, &pi, 0.001).unwrap();
    assert_eq!((tau.tau, tau_bar.tau, tau_hat.tau), (28, 6, 6));
}

#[test]
fn projected_matrix_by_hand() {
    let space = k2222();
    let part = iso_partition(&space).unwrap();
    let q = project(&switch_matrix(&space).unwrap(), &part).unwrap();
    // 16 of the binom(8, 2) = 28 pairs of ones lead into the connected class
    let g = part.representatives()[0];
    let row = exact_row(&space, ChainKind::Switch, g).unwrap();
    let into_h: BigRational = row
        .iter()
        .filter(|(t, _)| part.class_of()[**t] == 1)
        .map(|(_, r)| r.clone())
        .sum();
    assert_eq!(into_h, ratio(16, 28));
    assert!((q.get(0, 1) - 4.0 / 7.0).abs() < 1e-15 && (q.get(1, 0) - 1.0 / 7.0).abs() < 1e-15);
}

#[test]
fn undirected_example() {
    let k = DegreeSequence::undirected(vec![2, 2, 3, 2, 1]).unwrap();
    let space = enumerate(&k, DEFAULT_STATE_CAP).unwrap();
    assert_eq!(space.len(), 6);
    let part = iso_partition(&space).unwrap();
    assert_eq!(part.class_sizes(), &[3, 3]);
    let triangles: Vec<usize> = space.states().iter().map(|s| triangle_count(s, GraphKind::Undirected).unwrap()).collect();
    assert_eq!(triangles.iter().filter(|&&t| t == 1).count(), 3);
    assert_eq!(triangles.iter().filter(|&&t| t == 0).count(), 3);
    for chain in [ChainKind::Switch, ChainKind::Curveball] {
        let pi = stationary(&transition_matrix(&space, chain).unwrap(), None).unwrap();
        let mean: f64 = pi.weights().iter().zip(&triangles).map(|(w, &t)| w * t as f64).sum();
        assert!((mean - 0.5).abs() < 1e-12);
    }
}

#[test]
fn quadratic_family_structure() {
    for n in 3..=8usize {
        let space = enumerate(&quadratic_family(n).unwrap(), DEFAULT_STATE_CAP).unwrap();
        assert_eq!(space.len(), n * (2 * n - 1));
        let part = iso_partition(&space).unwrap();
        let mut sizes = part.class_sizes().to_vec();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![n, 2 * n * (n - 1)]);
        let small = part.class_sizes().iter().position(|&s| s == n).unwrap();
        let (g, h) = (part.representatives()[small], part.representatives()[1 - small]);
        assert!(!is_connected(space.state(g), GraphKind::Bipartite));
        assert!(is_connected(space.state(h), GraphKind::Bipartite));

        let into = |from: usize, class: usize| -> BigRational {
            exact_row(&space, ChainKind::Switch, from)
                .unwrap()
                .into_iter()
                .filter(|(t, _)| part.class_of()[*t] == class)
                .map(|(_, r)| r)
                .sum()
        };
        let pairs = binom(2 * n as u64, 2);
        assert_eq!(into(g, 1 - small), ratio(4 * (n as u64 - 1), pairs));
        assert_eq!(into(h, small), ratio(2, pairs));

        let p = switch_matrix(&space).unwrap();
        let q = project(&p, &part).unwrap();
        let s = spectral(&q, &stationary(&q, Some(&part)).unwrap()).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-10);
        assert!((s.eigenvalues[1] - (1.0 - 2.0 / n as f64)).abs() < 1e-10);
        assert!((s.gap - 2.0 / n as f64).abs() < 1e-10);
    }
}

#[test]
fn quadratic_family_smallest_member_is_one_class() {
    // for n = 2 the columns are all 1 and every state is isomorphic
    let space = enumerate(&quadratic_family(2).unwrap(), DEFAULT_STATE_CAP).unwrap();
    assert_eq!(space.len(), 6);
    assert_eq!(iso_partition(&space).unwrap().class_sizes(), &[6]);
}

#[test]
fn binomial_family_structure() {
    for l in 1..=5usize {
        let space = enumerate(&binomial_family(l).unwrap(), DEFAULT_STATE_CAP).unwrap();
        let total = binom(2 * l as u64, l as u64);
        assert_eq!(space.len() as u64, total);
        assert_eq!(iso_partition(&space).unwrap().len(), 1);
        // first row on the first l columns, and its mirror image
        let g = BinaryMatrix::from_fn(2, 2 * l, |i, j| (j < l) == (i == 0));
        let h = BinaryMatrix::from_fn(2, 2 * l, |i, j| (j < l) != (i == 0));
        let (gi, hi) = (space.index_of(&g).unwrap(), space.index_of(&h).unwrap());
        let row = exact_row(&space, ChainKind::Curveball, gi).unwrap();
        assert_eq!(row.len() as u64, total);
        assert!(row.values().all(|r| *r == ratio(1, total)));
        // each switch changes four entries and the two states differ in 4l
        let differing = (0..2).flat_map(|i| (0..2 * l).map(move |j| (i, j))).filter(|&(i, j)| g.get(i, j) != h.get(i, j)).count();
        assert_eq!(differing, 4 * l);
        let p = switch_matrix(&space).unwrap();
        assert_eq!(state_graph_distance(&p, gi, hi), Some(l));
        assert_eq!(state_graph_distance(&p, gi, gi), Some(0));
    }
}

#[test]
fn directed_triangle_is_split_by_switches() {
    let space = enumerate(&DegreeSequence::directed(vec![1; 3], vec![1; 3]).unwrap(), DEFAULT_STATE_CAP).unwrap();
    assert_eq!(space.len(), 2);
    let p = switch_matrix(&space).unwrap();
    assert_eq!(p, TransitionMatrix::identity(2));
    assert_eq!(state_graph_distance(&p, 0, 1), None);
    assert_eq!(iso_partition(&space).unwrap().len(), 1);
}
