use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::{parse_passage, parse_refinement, write_refinement, CorpusError, ParseMode};
use crate::graph::Passage;
use crate::refinement::RefinementDocument;

pub const FORMAT_VERSION: &str = "ucca-xml/1";
pub const REFINEMENT_SUFFIX: &str = ".refinement.json";

/// A directory of `*.xml` passage files, indexed by passage id.
#[derive(Clone, Debug)]
pub struct CorpusHandle {
    root: PathBuf,
    mode: ParseMode,
    entries: Vec<(String, PathBuf)>,
}

impl CorpusHandle {
    /// Scans `root` for passage files. Ids come from each file's `passageID`
    /// and are listed in file-name order.
    pub fn open(root: impl AsRef<Path>, mode: ParseMode) -> Result<Self, CorpusError> {
        let root = root.as_ref().to_path_buf();
        let mut paths: Vec<PathBuf> = fs::read_dir(&root)
            .map_err(|e| CorpusError::io(&root, e))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "xml"))
            .collect();
        paths.sort();
        let parsed: Vec<Result<(String, PathBuf), CorpusError>> = paths
            .into_par_iter()
            .map(|path| {
                let passage = read_passage(&path, mode)?;
                Ok((passage.id().to_string(), path))
            })
            .collect();
        let mut entries = Vec::with_capacity(parsed.len());
        let mut seen = BTreeMap::new();
        for item in parsed {
            let (id, path) = item?;
            if seen.insert(id.clone(), ()).is_some() {
                return Err(CorpusError::DuplicatePassage {
                    id,
                    path: path.display().to_string(),
                });
            }
            entries.push((id, path));
        }
        Ok(CorpusHandle {
            root,
            mode,
            entries,
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn format_version(&self) -> &'static str {
        FORMAT_VERSION
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(id, _)| id.as_str())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn path(&self, id: &str) -> Option<&Path> {
        self.entries
            .iter()
            .find(|(i, _)| i == id)
            .map(|(_, p)| p.as_path())
    }

    pub fn load(&self, id: &str) -> Result<Passage, CorpusError> {
        let path = self
            .path(id)
            .ok_or_else(|| CorpusError::UnknownPassage(id.to_string()))?;
        read_passage(path, self.mode)
    }

    /// All passages, in id order of the handle.
    pub fn load_all(&self) -> Result<Vec<Passage>, CorpusError> {
        self.entries
            .par_iter()
            .map(|(_, path)| read_passage(path, self.mode))
            .collect()
    }

    /// Sidecars for every passage from `dir`; a missing file yields an empty
    /// document.
    pub fn load_refinements(
        &self,
        dir: impl AsRef<Path>,
    ) -> Result<BTreeMap<String, RefinementDocument>, CorpusError> {
        let dir = dir.as_ref();
        let mut out = BTreeMap::new();
        for id in self.ids() {
            out.insert(id.to_string(), read_refinement_or_empty(dir, id)?);
        }
        Ok(out)
    }
}

pub fn read_passage(path: &Path, mode: ParseMode) -> Result<Passage, CorpusError> {
    let bytes = fs::read(path).map_err(|e| CorpusError::io(path, e))?;
    parse_passage(&bytes, mode).map_err(|e| CorpusError::in_file(path, e))
}

pub fn refinement_path(dir: &Path, passage_id: &str) -> PathBuf {
    dir.join(format!("{passage_id}{REFINEMENT_SUFFIX}"))
}

pub fn read_refinement_or_empty(dir: &Path, id: &str) -> Result<RefinementDocument, CorpusError> {
    let path = refinement_path(dir, id);
    match fs::read(&path) {
        Ok(bytes) => parse_refinement(&bytes).map_err(|e| CorpusError::in_file(&path, e)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(RefinementDocument::new(id)),
        Err(e) => Err(CorpusError::io(&path, e)),
    }
}

/// Writes through a temporary file in the same directory and renames it over
/// `path`, so readers see either the old or the new content.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CorpusError> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CorpusError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CorpusError::io(path, e))?;
    tmp.as_file()
        .sync_all()
        .map_err(|e| CorpusError::io(path, e))?;
    tmp.persist(path)
        .map_err(|e| CorpusError::io(path, e.error))?;
    Ok(())
}

pub fn write_refinement_file(dir: &Path, doc: &RefinementDocument) -> Result<PathBuf, CorpusError> {
    let path = refinement_path(dir, &doc.passage_id);
    write_atomic(&path, &write_refinement(doc))?;
    Ok(path)
}
