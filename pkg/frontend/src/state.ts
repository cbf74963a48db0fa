import type { Hit, SearchResult, TranscriptDoc } from './api.js';

// Shared view state. All three views plus the player render from this one
// object, so an edit that bumps the revision refreshes everything together.

export interface EditTarget {
  segmentIndex: number;
  tokenIndex: number;
}

export interface ViewState {
  transcript: TranscriptDoc | null;
  playbackPosition: number;
  searchTerm: string;
  hits: Hit[];
  hitCursor: number | null;
  treeKeyword: string;
  treeDirection: 'following' | 'preceding';
  pendingEdit: EditTarget | null;
  playedSegments: Set<number>;
}

type Listener = (state: ViewState) => void;

export class Store {
  private state: ViewState = {
    transcript: null,
    playbackPosition: 0,
    searchTerm: '',
    hits: [],
    hitCursor: null,
    treeKeyword: '',
    treeDirection: 'following',
    pendingEdit: null,
    playedSegments: new Set(),
  };
  private listeners: Listener[] = [];

  get(): ViewState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  setTranscript(doc: TranscriptDoc): void {
    const sameDoc = this.state.transcript?.id === doc.id;
    this.state = {
      ...this.state,
      transcript: doc,
      playbackPosition: sameDoc
        ? Math.min(this.state.playbackPosition, doc.audio.duration)
        : 0,
      // search results are revision-scoped; the caller re-runs the search
      hits: sameDoc ? this.state.hits : [],
      hitCursor: sameDoc ? this.state.hitCursor : null,
      pendingEdit: null,
      playedSegments: sameDoc ? this.state.playedSegments : new Set(),
    };
    this.emit();
  }

  setPlaybackPosition(seconds: number): void {
    const duration = this.state.transcript?.audio.duration ?? 0;
    const position = Math.min(Math.max(seconds, 0), duration);
    const playedSegments = new Set(this.state.playedSegments);
    const segment = this.segmentAt(position);
    if (segment !== null) playedSegments.add(segment);
    this.state = { ...this.state, playbackPosition: position, playedSegments };
    this.emit();
  }

  /** Index of the segment whose range contains the position; silence between
   *  segments snaps forward to the next one. */
  segmentAt(position: number): number | null {
    const doc = this.state.transcript;
    if (!doc) return null;
    for (const segment of doc.segments) {
      if (position < segment.end_time) return segment.index;
    }
    return null;
  }

  setSearch(result: SearchResult): void {
    this.state = {
      ...this.state,
      searchTerm: result.term,
      hits: result.hits,
      hitCursor: result.hits.length > 0 ? 0 : null,
    };
    this.emit();
  }

  clearSearch(): void {
    this.state = { ...this.state, searchTerm: '', hits: [], hitCursor: null };
    this.emit();
  }

  /** Step the hit cursor with wraparound, matching the service's navigation. */
  stepHit(direction: 1 | -1): void {
    const count = this.state.hits.length;
    if (count === 0) return;
    const current = this.state.hitCursor;
    let next: number;
    if (current === null) {
      next = direction === 1 ? 0 : count - 1;
    } else {
      next = (current + direction + count) % count;
    }
    this.state = { ...this.state, hitCursor: next };
    this.emit();
  }

  setTreeKeyword(keyword: string, direction: 'following' | 'preceding'): void {
    this.state = { ...this.state, treeKeyword: keyword, treeDirection: direction };
    this.emit();
  }

  setPendingEdit(target: EditTarget | null): void {
    this.state = { ...this.state, pendingEdit: target };
    this.emit();
  }

  hasPlayed(segmentIndex: number): boolean {
    return this.state.playedSegments.has(segmentIndex);
  }
}
