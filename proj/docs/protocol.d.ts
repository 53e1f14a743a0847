// Copyright 2026 The gramwb Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Payloads of the /api/v1 service. Field names match the C++ serializers
// exactly; optional fields are omitted, never null, unless typed `| null`.

export type Severity = "error" | "warning";
export type EngineName = "chart" | "td";

export interface Envelope {
  session: string;
  fingerprint: string; // empty before a grammar is loaded
}

export interface ErrorBody {
  error: { code: string; message: string };
}

export interface Location {
  file: string;
  line: number;
  column: number;
}

export interface Diagnostic extends Location {
  severity: Severity;
  kind: string;
  message: string;
}

export interface Finding {
  severity: Severity;
  kind: string; // "left-recursion", "undefined-nonterminal", ...
  witness: string[];
  locations: Location[];
  message: string;
}

export interface CheckReport {
  findings: Finding[];
  has_errors: boolean;
  blocks_topdown: boolean;
}

export interface LoadReport {
  ok: boolean;
  diagnostics: Diagnostic[];
  fingerprint: string;
  checks: CheckReport | null; // grammar loads only
}

export interface RuleRef {
  index: number;
  label: string;
  text: string;
  location: Location;
}

export type GrammarIndex = Record<string, { defined_by: RuleRef[]; referenced_by: RuleRef[] }>;

export interface ParseTree {
  label: string;
  features: string; // canonical bracketed text
  span: [number, number];
  word?: string;
  terminal?: true;
  children: ParseTree[];
  annotations?: string[];
}

export interface Reading {
  tree: ParseTree;
  fstructure?: string;
}

export interface ParseResult {
  sentence: string;
  tokens: string[];
  readings: Reading[];
  engine: string;
  fingerprint: string;
  timestamp: string;
  status: "complete" | "edge-limit" | "depth-limit" | "aborted";
  diagnostics: Diagnostic[];
}

export interface TraceEvent {
  port: "ENTRY" | "EXIT" | "FAIL" | "REDO";
  label: string;
  features: string;
  depth: number;
  position: number;
  goal: number; // one goal invocation
  end?: number; // EXIT only
}

export interface LexicalStep {
  token: number;
  word: string;
  entry: string; // empty for unknown words
  rule: string;
  category: string;
}

export interface Span {
  from: number;
  to: number;
  label: string;
  id: number | null; // null for word units
}

export interface FailureReport {
  fragments: Span[];
  covered: number;
  total: number;
  coverage: number;
  paths: Span[][];
}

export interface ParseOutcome {
  engine: EngineName;
  result: ParseResult;
  trace: TraceEvent[];
  lexical: LexicalStep[];
  unknown_tokens: number[];
  failure: FailureReport | null; // set whenever there is no reading
  output?: string; // parse endpoint with `format`
}

export interface ChartEdge {
  id: number; // strictly increasing in creation order
  span: [number, number];
  label: string;
  state: "active" | "passive";
  origin: "lexical" | "word" | "rule";
  features: string;
  children: number[];
  word?: string;
  lexical_rule?: string;
  rule?: number;
  rule_label?: string;
  needed?: string[]; // active edges
}

export interface WfstEntry {
  category: string;
  start: number;
  complete: boolean;
  solutions: { end: number; seq: number; features: string; tree: ParseTree }[];
}

export type ChartView =
  | { engine: "chart"; tokens: string[]; truncated: boolean; edges: ChartEdge[] }
  | { engine: "td"; wfst: WfstEntry[] };

export type Verdict = "equal" | "shape_diff" | "label_diff" | "feature_diff" | "reading_count_diff";

export interface ComparisonReport {
  verdict: Verdict;
  text: string;
  node_path?: number[];
  left?: string;
  right?: string;
  feature_path?: string[];
}

export interface ResultComparison {
  pairs: ComparisonReport[];
  old_count: number;
  new_count: number;
  count_delta: number;
  verdict: Verdict;
  summary: string; // "equal", "+1 additional reading", ...
}

export interface SuiteRow {
  index: number;
  phenomenon: string;
  sentence: string;
  good: boolean;
  tags: string[];
  expected: number | null;
  readings: number;
  outcome: "pass" | "fail" | "error";
  status: string;
  reason: string;
  verdict: Verdict | null; // null when no baseline was compared
  comparison: string;
  elapsed_ms: number;
}

export interface SuiteTable {
  rows: SuiteRow[];
  totals: { cases: number; pass: number; fail: number; error: number };
  all_equal: boolean;
}

export interface SessionState {
  engine: EngineName;
  trace: "*" | string[];
  breakpoints: string[];
  grammar: string | null;
  formalism: string | null;
  lexicon_loaded: boolean;
}

export interface JobStatus {
  job: string;
  done: boolean;
  events: number;
  paused_at: TraceEvent | null;
  outcome: ParseOutcome | null;
  error: string;
}

export interface Config {
  store_dir: string;
  suite_dirs: string[];
  engine: EngineName;
  workers: number;
  port: number;
  session_idle_minutes: number;
}

// Server-sent events.
export type TraceJobEvent =
  | { event: "trace"; data: TraceEvent }
  | { event: "paused"; data: TraceEvent }
  | { event: "done"; data: { session: string; error: string; outcome: ParseOutcome | null } };

export type SuiteRunEvent =
  | { event: "progress"; data: { done: number; total: number; row: SuiteRow } }
  | { event: "done"; data: { session: string; fingerprint: string; table: SuiteTable } };
