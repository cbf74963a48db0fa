import { ApiClient, RequestFailed } from './api.js';
import type { Alternative, EditBody, Overview, Rect, WordTree } from './api.js';
import { EditorView } from './editor.js';
import { OverviewView } from './overview.js';
import { Player } from './player.js';
import type { EditTarget } from './state.js';
import { Store } from './state.js';
import { WordTreeView } from './wordtree.js';

/**
 * Composition root. Owns the store, the three coordinated views and the
 * player, and is the only place that talks to the API. Mutations are
 * serialized: one in-flight edit at a time, and the UI never shows an edit
 * before the server has acknowledged it with a new revision.
 */
export class App {
  readonly store = new Store();
  private readonly overviewView: OverviewView;
  private readonly editorView: EditorView;
  private readonly treeView: WordTreeView;
  private readonly player: Player;

  private overviewPayload: Overview | null = null;
  private treePayload: WordTree | null = null;
  private alternatives: Alternative[] | null = null;
  private mutationInFlight = false;
  private pending: Promise<void> | null = null;

  private readonly revisionBadge: HTMLElement;
  private readonly banner: HTMLElement;
  private readonly hitCounter: HTMLElement;
  private readonly searchInput: HTMLInputElement;
  private readonly select: HTMLSelectElement;

  constructor(
    root: HTMLElement,
    private readonly api: ApiClient,
  ) {
    root.innerHTML = `
      <header class="topbar">
        <h1>scribeview</h1>
        <select id="transcript-select"></select>
        <span id="revision" class="revision"></span>
        <button id="undo">Undo</button>
        <form id="search-form">
          <input id="search-input" placeholder="search a word" />
          <button type="submit">Search</button>
          <button type="button" id="prev-hit">&#8592;</button>
          <button type="button" id="next-hit">&#8594;</button>
          <span id="hit-counter"></span>
        </form>
      </header>
      <div id="banner" class="banner" hidden></div>
      <audio id="audio" controls></audio>
      <div id="overview"></div>
      <main class="views">
        <div id="editor"></div>
        <div id="wordtree"></div>
      </main>
    `;
    this.revisionBadge = root.querySelector('#revision')!;
    this.banner = root.querySelector('#banner')!;
    this.hitCounter = root.querySelector('#hit-counter')!;
    this.searchInput = root.querySelector('#search-input')!;
    this.select = root.querySelector('#transcript-select')!;

    this.player = new Player(root.querySelector('#audio')!, this.store);
    this.overviewView = new OverviewView(root.querySelector('#overview')!, {
      onRectClick: (rect) => this.seekToSegment(rect),
    });
    this.editorView = new EditorView(root.querySelector('#editor')!, {
      onWordClick: (target) => this.openEditMenu(target),
      onSubmitEdit: (body) => this.track(this.submitEdit(body)),
      onCloseMenu: () => this.store.setPendingEdit(null),
    });
    this.treeView = new WordTreeView(root.querySelector('#wordtree')!, {
      onDirectionChange: (direction) => this.track(this.loadTree(direction)),
    });

    this.select.addEventListener('change', () =>
      this.track(this.openTranscript(this.select.value)),
    );
    root.querySelector('#undo')!.addEventListener('click', () => this.track(this.undo()));
    root.querySelector('#search-form')!.addEventListener('submit', (event) => {
      event.preventDefault();
      this.track(this.runSearch(this.searchInput.value.trim()));
    });
    root.querySelector('#prev-hit')!.addEventListener('click', () => this.store.stepHit(-1));
    root.querySelector('#next-hit')!.addEventListener('click', () => this.store.stepHit(1));

    this.store.subscribe(() => this.renderViews());
  }

  // --- lifecycle ---------------------------------------------------------

  async init(): Promise<void> {
    const listing = await this.api.listTranscripts();
    this.select.textContent = '';
    for (const summary of listing.transcripts) {
      const option = document.createElement('option');
      option.value = summary.id;
      option.textContent = `${summary.id} (${summary.segments} segments)`;
      this.select.appendChild(option);
    }
    if (listing.transcripts.length > 0) {
      await this.openTranscript(listing.transcripts[0].id);
    }
  }

  async openTranscript(id: string): Promise<void> {
    const doc = await this.api.getTranscript(id);
    this.overviewPayload = await this.api.getOverview(id, this.overviewView.viewport());
    this.treePayload = null;
    this.alternatives = null;
    this.player.load(this.api.audioUrl(id));
    this.select.value = id;
    this.store.setTranscript(doc);
    this.treeView.renderEmpty('');
  }

  /** Refetch everything at the current head revision and rerender. */
  async refresh(): Promise<void> {
    const doc = this.store.get().transcript;
    if (!doc) return;
    const fresh = await this.api.getTranscript(doc.id);
    this.overviewPayload = await this.api.getOverview(fresh.id, this.overviewView.viewport());
    this.store.setTranscript(fresh);
    const { searchTerm, treeKeyword, treeDirection } = this.store.get();
    if (searchTerm) await this.runSearch(searchTerm);
    else if (treeKeyword) await this.loadTree(treeDirection);
  }

  /** Await every action started by an event handler; test hook. */
  async settle(): Promise<void> {
    while (this.pending) {
      const current = this.pending;
      await current.catch(() => undefined);
      if (this.pending === current) this.pending = null;
    }
  }

  private track(work: Promise<void>): void {
    const chained = (this.pending ?? Promise.resolve()).then(() => work);
    this.pending = chained.catch((error) => {
      this.showBanner(error instanceof Error ? error.message : String(error));
    });
  }

  // --- actions -----------------------------------------------------------

  private seekToSegment(rect: Rect): void {
    const doc = this.store.get().transcript;
    if (!doc) return;
    this.player.seek(doc.segments[rect.segment_index].start_time);
  }

  async runSearch(term: string): Promise<void> {
    const doc = this.store.get().transcript;
    if (!doc) return;
    if (!term) {
      this.store.clearSearch();
      this.treeView.renderEmpty('');
      return;
    }
    const result = await this.api.search(doc.id, term);
    this.store.setSearch(result);
    this.store.setTreeKeyword(term, this.store.get().treeDirection);
    await this.loadTree(this.store.get().treeDirection);
  }

  private async loadTree(direction: 'following' | 'preceding'): Promise<void> {
    const { transcript, treeKeyword } = this.store.get();
    if (!transcript || !treeKeyword) return;
    try {
      this.treePayload = await this.api.getWordTree(transcript.id, treeKeyword, direction);
      this.store.setTreeKeyword(treeKeyword, direction);
      this.treeView.render(this.treePayload);
    } catch (error) {
      if (error instanceof RequestFailed && error.status === 404) {
        this.treePayload = null;
        this.treeView.renderEmpty(treeKeyword);
        return;
      }
      throw error;
    }
  }

  private openEditMenu(target: EditTarget): void {
    this.alternatives = null;
    this.store.setPendingEdit(target);
    const doc = this.store.get().transcript;
    if (!doc) return;
    this.track(
      this.api
        .getAlternatives(doc.id, target.segmentIndex, target.tokenIndex)
        .then((list) => {
          this.alternatives = list;
          this.renderViews();
        }),
    );
  }

  private async submitEdit(body: EditBody): Promise<void> {
    const doc = this.store.get().transcript;
    if (!doc || this.mutationInFlight) return;
    this.mutationInFlight = true;
    try {
      await this.api.applyEdit(doc.id, body);
      this.hideBanner();
      await this.refresh();
    } catch (error) {
      if (error instanceof RequestFailed && error.status === 409) {
        this.showBanner('Someone else edited this transcript; reloaded the latest revision.');
        await this.refresh();
        return;
      }
      throw error;
    } finally {
      this.mutationInFlight = false;
    }
  }

  private async undo(): Promise<void> {
    const doc = this.store.get().transcript;
    if (!doc || this.mutationInFlight) return;
    this.mutationInFlight = true;
    try {
      await this.api.undo(doc.id, doc.revision);
      this.hideBanner();
      await this.refresh();
    } catch (error) {
      if (error instanceof RequestFailed && error.status === 409) {
        this.showBanner(error.body.message);
        await this.refresh();
        return;
      }
      throw error;
    } finally {
      this.mutationInFlight = false;
    }
  }

  // --- rendering ---------------------------------------------------------

  private renderViews(): void {
    const state = this.store.get();
    const doc = state.transcript;
    if (!doc) return;
    this.revisionBadge.textContent = `rev ${doc.revision}`;
    if (this.overviewPayload) this.overviewView.render(this.overviewPayload);
    this.editorView.render(doc, state, this.alternatives);
    this.hitCounter.textContent =
      state.hits.length === 0
        ? state.searchTerm
          ? 'no matches'
          : ''
        : `${(state.hitCursor ?? 0) + 1}/${state.hits.length}`;
  }

  private showBanner(message: string): void {
    this.banner.textContent = message;
    this.banner.hidden = false;
  }

  private hideBanner(): void {
    this.banner.textContent = '';
    this.banner.hidden = true;
  }
}

declare global {
  interface Window {
    scribeviewApp?: App;
  }
}

// boot only when the host page provides a mount point
if (typeof document !== 'undefined') {
  const mount = document.getElementById('app');
  if (mount) {
    const app = new App(mount, new ApiClient(''));
    window.scribeviewApp = app;
    void app.init();
  }
}
