use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{FeatureGroup, PairRow, TaskRow};
use crate::corpus::{
    encode_big_issues, opinion_similarity, BigIssuesVector, Corpus, Debate, Side, Trait, UserProfile,
};
use crate::error::EvalError;
use crate::graph::{build_friendship, build_voter_graph, user_graph_features, GraphAnalytics, IterParams, USER_GRAPH_FEATURES};
use crate::learn::Dataset;
use crate::textfeat::{
    claim_or_side_features, fit_tfidf, interplay_features, side_feature_names, side_text, tokenize,
    LexiconSet, TfidfConfig, TfidfModel, TokenStream, INTERPLAY_NAMES,
};

/// Everything the feature groups need, computed once per corpus. Only the
/// parts required by the requested groups are built.
pub struct FeatureContext<'a> {
    corpus: &'a Corpus,
    lex: &'a LexiconSet,
    debates: BTreeMap<&'a str, &'a Debate>,
    streams: BTreeMap<&'a str, [TokenStream; 2]>,
    lexical: BTreeMap<&'a str, [Vec<f64>; 2]>,
    tfidf: Option<TfidfModel>,
    analytics: Option<GraphAnalytics>,
    issues: BTreeMap<&'a str, BigIssuesVector>,
}

fn side_stream(debate: &Debate, side: Side) -> TokenStream {
    side_text(debate, side).map(|t| tokenize(&t)).unwrap_or_default()
}

impl<'a> FeatureContext<'a> {
    /// `tfidf_features` caps the tf-idf vocabulary, which is fitted on every
    /// debate side of the corpus without looking at labels.
    pub fn new(
        corpus: &'a Corpus,
        lex: &'a LexiconSet,
        groups: &[FeatureGroup],
        tfidf_features: usize,
    ) -> Result<Self, EvalError> {
        let has = |g| groups.contains(&g);
        let text = has(FeatureGroup::Linguistic) || has(FeatureGroup::Tfidf) || has(FeatureGroup::Interplay);
        let mut ctx = FeatureContext {
            corpus,
            lex,
            debates: corpus.debates().iter().map(|d| (d.debate_id.as_str(), d)).collect(),
            streams: BTreeMap::new(),
            lexical: BTreeMap::new(),
            tfidf: None,
            analytics: None,
            issues: BTreeMap::new(),
        };
        if text {
            for d in corpus.debates() {
                let s = [side_stream(d, Side::Pro), side_stream(d, Side::Con)];
                ctx.streams.insert(d.debate_id.as_str(), s);
            }
        }
        if has(FeatureGroup::Linguistic) {
            for (id, [p, c]) in &ctx.streams {
                let f = [claim_or_side_features(p, lex).values, claim_or_side_features(c, lex).values];
                ctx.lexical.insert(id, f);
            }
        }
        if has(FeatureGroup::Tfidf) {
            let docs: Vec<Vec<String>> = ctx
                .streams
                .values()
                .flat_map(|s| s.iter().map(|t| t.tokens.clone()))
                .collect();
            if !docs.is_empty() {
                let cfg = TfidfConfig {
                    ngram_max: 1,
                    max_features: tfidf_features,
                };
                ctx.tfidf = Some(fit_tfidf(&docs, cfg)?);
            }
        }
        if has(FeatureGroup::Graph) || has(FeatureGroup::Network) || has(FeatureGroup::Friends) {
            let a = GraphAnalytics::compute(&build_friendship(corpus), &build_voter_graph(corpus), IterParams::default())?;
            ctx.analytics = Some(a);
        }
        if has(FeatureGroup::User) {
            for u in corpus.users() {
                if let Ok(v) = encode_big_issues(u, corpus.catalog()) {
                    ctx.issues.insert(u.user_id.as_str(), v);
                }
            }
        }
        Ok(ctx)
    }

    fn user(&self, id: &str) -> Result<&'a UserProfile, EvalError> {
        self.corpus.user(id).ok_or_else(|| EvalError::UnknownId(String::from(id)))
    }

    fn similarity(&self, a: &str, b: &str) -> f64 {
        match (self.issues.get(a), self.issues.get(b)) {
            (Some(x), Some(y)) => opinion_similarity(x, y).unwrap_or(0.0),
            _ => 0.0,
        }
    }

    fn tfidf_dense(&self, s: &TokenStream) -> Vec<f64> {
        let Some(model) = &self.tfidf else { return Vec::new() };
        let sparse = model.transform_tokens(&s.tokens);
        let mut dense = vec![0.0; model.vocabulary().len()];
        for (&i, &v) in sparse.indices.iter().zip(&sparse.values) {
            dense[i] = v;
        }
        dense
    }

    fn graph_values(&self, user: &str) -> Vec<f64> {
        self.analytics
            .as_ref()
            .map(|a| user_graph_features(user, a).values)
            .unwrap_or_else(|| vec![0.0; USER_GRAPH_FEATURES.len()])
    }

    fn group_schema(&self, g: FeatureGroup) -> Vec<String> {
        let names: Vec<String> = match g {
            FeatureGroup::User => Trait::ALL
                .iter()
                .map(|t| format!("{}_match", t.name()))
                .chain([String::from("big_issues_similarity")])
                .collect(),
            FeatureGroup::Linguistic => side_feature_names(),
            FeatureGroup::Tfidf => self
                .tfidf
                .as_ref()
                .map(|m| m.vocabulary().to_vec())
                .unwrap_or_default(),
            FeatureGroup::Interplay => INTERPLAY_NAMES.iter().map(|s| String::from(*s)).collect(),
            FeatureGroup::Graph => USER_GRAPH_FEATURES.iter().map(|s| String::from(*s)).collect(),
            FeatureGroup::Network => USER_GRAPH_FEATURES[..7].iter().map(|s| String::from(*s)).collect(),
            FeatureGroup::Friends => USER_GRAPH_FEATURES[7..].iter().map(|s| String::from(*s)).collect(),
        };
        names.into_iter().map(|n| format!("{}:{n}", g.name())).collect()
    }

    fn task_values(&self, g: FeatureGroup, row: &TaskRow) -> Result<Vec<f64>, EvalError> {
        let d = *self
            .debates
            .get(row.debate_id.as_str())
            .ok_or_else(|| EvalError::UnknownId(row.debate_id.clone()))?;
        let diff = |a: Vec<f64>, b: Vec<f64>| a.iter().zip(&b).map(|(x, y)| x - y).collect::<Vec<f64>>();
        Ok(match g {
            FeatureGroup::User => {
                let voter = self.user(&row.voter_id)?;
                let pro = self.user(&d.pro_user)?;
                let con = self.user(&d.con_user)?;
                let same = |a: &UserProfile, t: Trait| -> f64 {
                    match (voter.trait_value(t), a.trait_value(t)) {
                        (Some(x), Some(y)) if x.eq_ignore_ascii_case(y) => 1.0,
                        _ => 0.0,
                    }
                };
                let mut v: Vec<f64> = Trait::ALL.iter().map(|&t| same(pro, t) - same(con, t)).collect();
                v.push(self.similarity(&row.voter_id, &d.pro_user) - self.similarity(&row.voter_id, &d.con_user));
                v
            }
            FeatureGroup::Linguistic => {
                let [p, c] = self.lexical.get(row.debate_id.as_str()).ok_or(EvalError::Empty)?.clone();
                diff(p, c)
            }
            FeatureGroup::Tfidf => {
                let [p, c] = self.streams.get(row.debate_id.as_str()).ok_or(EvalError::Empty)?;
                diff(self.tfidf_dense(p), self.tfidf_dense(c))
            }
            FeatureGroup::Interplay => {
                let [p, c] = self.streams.get(row.debate_id.as_str()).ok_or(EvalError::Empty)?;
                diff(interplay_features(p, c, self.lex).values, interplay_features(c, p, self.lex).values)
            }
            FeatureGroup::Graph => diff(self.graph_values(&d.pro_user), self.graph_values(&d.con_user)),
            FeatureGroup::Network | FeatureGroup::Friends => {
                return Err(EvalError::GroupNotApplicable {
                    group: g.name(),
                    task: "debate/voter rows",
                })
            }
        })
    }

    fn user_values(&self, g: FeatureGroup, user: &str) -> Result<Vec<f64>, EvalError> {
        Ok(match g {
            FeatureGroup::Network => self.graph_values(user)[..7].to_vec(),
            FeatureGroup::Friends => self.graph_values(user)[7..].to_vec(),
            FeatureGroup::Linguistic => {
                let mut sum = vec![0.0; side_feature_names().len()];
                let mut n = 0.0;
                for d in self.corpus.debates_of(user) {
                    let side = d.side_of(user).expect("debater");
                    if let Some(f) = self.lexical.get(d.debate_id.as_str()) {
                        let f = &f[usize::from(side == Side::Con)];
                        sum.iter_mut().zip(f).for_each(|(s, x)| *s += x);
                        n += 1.0;
                    }
                }
                if n > 0.0 {
                    sum.iter_mut().for_each(|s| *s /= n);
                }
                sum
            }
            _ => {
                return Err(EvalError::GroupNotApplicable {
                    group: g.name(),
                    task: "user pairs",
                })
            }
        })
    }
}

/// Rows of (debate, voter) features: every column is the PRO value minus the
/// CON value, so the label is 0 when PRO won this voter.
pub fn task_dataset(ctx: &FeatureContext<'_>, rows: &[TaskRow], groups: &[FeatureGroup]) -> Result<Dataset, EvalError> {
    let schema: Vec<String> = groups.iter().flat_map(|&g| ctx.group_schema(g)).collect();
    let mut data = Vec::with_capacity(rows.len());
    for r in rows {
        let mut v = Vec::with_capacity(schema.len());
        for &g in groups {
            v.extend(ctx.task_values(g, r)?);
        }
        data.push(v);
    }
    let labels = rows.iter().map(|r| r.label).collect();
    Ok(Dataset::new(schema, data, labels, 2)?)
}

/// Rows of user-pair features: first user's values minus the second's.
pub fn pair_dataset(ctx: &FeatureContext<'_>, pairs: &[PairRow], groups: &[FeatureGroup]) -> Result<Dataset, EvalError> {
    let schema: Vec<String> = groups.iter().flat_map(|&g| ctx.group_schema(g)).collect();
    let mut data = Vec::with_capacity(pairs.len());
    for p in pairs {
        let mut v = Vec::with_capacity(schema.len());
        for &g in groups {
            let a = ctx.user_values(g, &p.users[0])?;
            let b = ctx.user_values(g, &p.users[1])?;
            v.extend(a.iter().zip(&b).map(|(x, y)| x - y));
        }
        data.push(v);
    }
    let labels = pairs.iter().map(|p| p.label).collect();
    Ok(Dataset::new(schema, data, labels, 2)?)
}
