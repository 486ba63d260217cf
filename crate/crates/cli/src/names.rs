//! Prefixed-name expansion for command-line arguments and compaction for output.

use std::collections::BTreeMap;

use parx_core::vocab::NAMESPACES;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Prefixes {
    map: BTreeMap<String, String>,
}

impl Prefixes {
    pub fn new(map: BTreeMap<String, String>) -> Self {
        Prefixes { map }
    }

    pub fn as_map(&self) -> &BTreeMap<String, String> {
        &self.map
    }

    /// Accepts `<iri>`, an absolute IRI or `prefix:local`. Prefix lookup falls
    /// back to a case-insensitive match when that match is unambiguous.
    pub fn expand(&self, name: &str) -> Result<String, String> {
        let name = name.trim();
        if let Some(inner) = name.strip_prefix('<').and_then(|s| s.strip_suffix('>')) {
            return Ok(inner.to_owned());
        }
        if name.contains("://") || name.starts_with("urn:") {
            return Ok(name.to_owned());
        }
        let (prefix, local) =
            name.split_once(':').ok_or_else(|| format!("'{name}' is neither an IRI nor a prefixed name"))?;
        if let Some(ns) = self.map.get(prefix) {
            return Ok(format!("{ns}{local}"));
        }
        let mut folded: Vec<&String> =
            self.map.iter().filter(|(p, _)| p.eq_ignore_ascii_case(prefix)).map(|(_, ns)| ns).collect();
        folded.dedup();
        match folded.as_slice() {
            [ns] => Ok(format!("{ns}{local}")),
            [] => Err(format!("unknown prefix '{prefix}:' in '{name}'")),
            _ => Err(format!("prefix '{prefix}:' is ambiguous")),
        }
    }

    /// Shortest readable form: the longest matching namespace wins, canonical
    /// prefixes before document prefixes, then alphabetical.
    pub fn compact(&self, iri: &str) -> String {
        let canonical = |p: &str| NAMESPACES.iter().any(|n| n.prefix == p);
        let best = self
            .map
            .iter()
            .filter(|(_, ns)| !ns.is_empty() && iri.len() > ns.len() && iri.starts_with(ns.as_str()))
            .filter(|(_, ns)| is_local_name(&iri[ns.len()..]))
            .min_by(|(pa, na), (pb, nb)| {
                nb.len().cmp(&na.len()).then(canonical(pb).cmp(&canonical(pa))).then(pa.cmp(pb))
            });
        match best {
            Some((p, ns)) => format!("{p}:{}", &iri[ns.len()..]),
            None => format!("<{iri}>"),
        }
    }
}

fn is_local_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.')) && !s.ends_with('.')
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prefixes() -> Prefixes {
        let mut m: BTreeMap<String, String> =
            NAMESPACES.iter().map(|n| (n.prefix.to_owned(), n.base_iri.to_owned())).collect();
        m.insert("ex".into(), "http://example.org/rtm#".into());
        m.insert("DIN61360".into(), "http://www.w3id.org/hsu-aut/DINEN61360#".into());
        Prefixes::new(m)
    }

    #[test]
    fn expansion() {
        let p = prefixes();
        assert_eq!(p.expand("ex:Injection").unwrap(), "http://example.org/rtm#Injection");
        assert_eq!(p.expand("<http://x.org/a>").unwrap(), "http://x.org/a");
        assert_eq!(p.expand("http://x.org/a").unwrap(), "http://x.org/a");
        assert_eq!(p.expand("om:Variable").unwrap(), "http://openmath.org/vocab/math#Variable");
        assert!(p.expand("nope:x").is_err());
        assert!(p.expand("plain").is_err());
    }

    #[test]
    fn compaction_prefers_canonical_prefix() {
        let p = prefixes();
        assert_eq!(p.compact("http://www.w3id.org/hsu-aut/DINEN61360#DataElement"), "DINEN61360:DataElement");
        assert_eq!(p.compact("http://example.org/rtm#CavityVolume-B"), "ex:CavityVolume-B");
        assert_eq!(p.compact("http://elsewhere.org/x/y"), "<http://elsewhere.org/x/y>");
        assert_eq!(p.compact("http://example.org/rtm#a/b"), "<http://example.org/rtm#a/b>");
    }
}
