// Typed client for the transcript service. Every number the UI displays
// comes out of these payloads; no confidence math happens in the browser.

export interface Alternative {
  content: string;
  confidence: number;
}

export interface Token {
  kind: 'pronunciation' | 'punctuation';
  content: string;
  confidence: number;
  start_time?: number;
  end_time?: number;
  alternatives: Alternative[];
  human_verified: boolean;
}

export interface Segment {
  index: number;
  speaker: string;
  start_time: number;
  end_time: number;
  tokens: Token[];
}

export interface Speaker {
  label: string;
  color_index: number;
}

export interface TranscriptDoc {
  format: string;
  id: string;
  revision: number;
  audio: { uri: string; duration: number; media_type: string };
  speakers: Speaker[];
  segments: Segment[];
}

export interface TranscriptSummary {
  id: string;
  revision: number;
  segments: number;
  duration: number;
  speakers: number;
}

export interface Tooltip {
  line: number;
  mean_confidence: number;
  text: string;
}

export interface Rect {
  segment_index: number;
  x: number;
  width: number;
  opacity: number;
  tooltip: Tooltip;
}

export interface Overview {
  transcript_id: string;
  revision: number;
  viewport: number;
  rects: Rect[];
}

export interface Hit {
  segment_index: number;
  token_index: number;
  content: string;
  confidence: number;
}

export interface SearchResult {
  transcript_id: string;
  revision: number;
  term: string;
  mode: string;
  case_sensitive: boolean;
  hits: Hit[];
  keyword_confidence: number | null;
}

export interface TreeNode {
  word: string;
  count: number;
  children: TreeNode[];
}

export interface WordTree {
  transcript_id: string;
  revision: number;
  keyword: string;
  direction: 'following' | 'preceding';
  max_depth: number;
  tree: TreeNode;
  keyword_confidence: number;
  homophones: string[];
}

export interface EditBody {
  kind: 'insert' | 'delete' | 'replace';
  segment_index: number;
  token_index: number;
  content?: string;
  source?: 'manual' | 'alternative';
  expected_revision: number;
}

export interface EditAck {
  transcript_id: string;
  revision: number;
}

export interface ApiError {
  code: string;
  message: string;
  detail?: unknown;
}

export class RequestFailed extends Error {
  constructor(readonly status: number, readonly body: ApiError) {
    super(`${body.code}: ${body.message}`);
  }
}

async function parseOrThrow<T>(response: Response): Promise<T> {
  if (!response.ok) {
    throw new RequestFailed(response.status, (await response.json()) as ApiError);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  // base is '' when the UI is served by the service itself
  constructor(private readonly base: string = '') {}

  private url(path: string, params?: Record<string, string | number>): string {
    let query = '';
    if (params) {
      const search = new URLSearchParams();
      for (const [key, value] of Object.entries(params)) search.set(key, String(value));
      query = `?${search.toString()}`;
    }
    return `${this.base}${path}${query}`;
  }

  listTranscripts(): Promise<{ transcripts: TranscriptSummary[] }> {
    return fetch(this.url('/v1/transcripts')).then((r) => parseOrThrow(r));
  }

  getTranscript(id: string): Promise<TranscriptDoc> {
    return fetch(this.url(`/v1/transcripts/${id}`)).then((r) => parseOrThrow(r));
  }

  getOverview(id: string, viewport: number): Promise<Overview> {
    return fetch(this.url(`/v1/transcripts/${id}/overview`, { viewport })).then((r) =>
      parseOrThrow(r),
    );
  }

  search(id: string, term: string, mode = 'token-exact'): Promise<SearchResult> {
    return fetch(this.url(`/v1/transcripts/${id}/search`, { q: term, mode })).then((r) =>
      parseOrThrow(r),
    );
  }

  getWordTree(
    id: string,
    keyword: string,
    direction: 'following' | 'preceding',
  ): Promise<WordTree> {
    return fetch(this.url(`/v1/transcripts/${id}/wordtree`, { q: keyword, dir: direction })).then(
      (r) => parseOrThrow(r),
    );
  }

  getAlternatives(id: string, segment: number, token: number): Promise<Alternative[]> {
    return fetch(this.url(`/v1/transcripts/${id}/alternatives`, { segment, token })).then((r) =>
      parseOrThrow(r),
    );
  }

  applyEdit(id: string, body: EditBody): Promise<EditAck> {
    return fetch(this.url(`/v1/transcripts/${id}/edits`), {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    }).then((r) => parseOrThrow(r));
  }

  undo(id: string, expectedRevision?: number): Promise<EditAck> {
    return fetch(this.url(`/v1/transcripts/${id}/undo`), {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(expectedRevision === undefined ? {} : { expected_revision: expectedRevision }),
    }).then((r) => parseOrThrow(r));
  }

  audioUrl(id: string): string {
    return this.url(`/v1/transcripts/${id}/audio`);
  }
}
