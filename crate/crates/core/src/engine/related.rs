use crate::corpus::Repository;

/// Number of leading name segments two package names share.
pub fn shared_segments(a: &str, b: &str, separator: char) -> usize {
    a.split(separator)
        .zip(b.split(separator))
        .take_while(|(x, y)| x == y)
        .count()
}

/// Packages inferred to belong to the same project as `package_name`: those
/// sharing at least the first name segment. Nearest (most shared segments)
/// first, ties in name order. Unknown packages have no relatives.
pub fn related_packages(repo: &Repository, package_name: &str) -> Vec<String> {
    if repo.package(package_name).is_none() {
        return Vec::new();
    }
    let separator = repo.separator();
    let mut related: Vec<(usize, &str)> = repo
        .packages()
        .iter()
        .filter(|p| p.name != package_name)
        .map(|p| {
            (
                shared_segments(package_name, &p.name, separator),
                p.name.as_str(),
            )
        })
        .filter(|(depth, _)| *depth > 0)
        .collect();
    related.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(b.1)));
    related
        .into_iter()
        .map(|(_, name)| name.to_owned())
        .collect()
}
