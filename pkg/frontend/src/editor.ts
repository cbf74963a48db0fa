import type { Alternative, EditBody, Token, TranscriptDoc } from './api.js';
import { HIT_YELLOW, speakerColor, underlineOpacity } from './scale.js';
import type { EditTarget, ViewState } from './state.js';

export interface EditorCallbacks {
  onWordClick?: (target: EditTarget) => void;
  onSubmitEdit?: (body: EditBody) => void;
  onCloseMenu?: () => void;
}

const UNDERLINE_RGB = '26, 110, 216';

/**
 * The transcription editor: one line per segment, every spoken word
 * underlined with an opacity that encodes its confidence, search hits in
 * yellow, the currently playing segment bold. Clicking a word opens a menu
 * bound to exactly that (segment, token) coordinate.
 */
export class EditorView {
  // soft guard: cleared whenever the edit target changes
  private guardDismissed = false;
  private guardTarget: EditTarget | null = null;

  constructor(
    private readonly container: HTMLElement,
    private readonly callbacks: EditorCallbacks = {},
  ) {
    this.container.classList.add('editor');
  }

  render(doc: TranscriptDoc, state: ViewState, alternatives: Alternative[] | null): void {
    this.container.textContent = '';
    const colorByLabel = new Map(
      doc.speakers.map((s) => [s.label, speakerColor(s.color_index)]),
    );
    const hitKeys = new Set(state.hits.map((h) => `${h.segment_index}:${h.token_index}`));
    const currentHit =
      state.hitCursor === null ? null : state.hits[state.hitCursor] ?? null;
    const playingSegment = this.segmentAt(doc, state.playbackPosition);

    for (const segment of doc.segments) {
      const line = document.createElement('div');
      line.className = 'editor-line';
      line.dataset.segment = String(segment.index);
      if (segment.index === playingSegment) {
        line.classList.add('playing');
        if (typeof line.scrollIntoView === 'function') {
          try {
            line.scrollIntoView({ block: 'nearest' });
          } catch {
            // jsdom has no layout
          }
        }
      }

      const label = document.createElement('span');
      label.className = 'speaker-label';
      label.textContent = segment.speaker;
      label.style.color = colorByLabel.get(segment.speaker) ?? '#111';
      line.appendChild(label);

      segment.tokens.forEach((token, tokenIndex) => {
        if (tokenIndex > 0 && token.kind === 'pronunciation') {
          line.appendChild(document.createTextNode(' '));
        }
        line.appendChild(
          this.wordSpan(token, segment.index, tokenIndex, hitKeys, currentHit),
        );
      });
      this.container.appendChild(line);

      if (state.pendingEdit && state.pendingEdit.segmentIndex === segment.index) {
        this.container.appendChild(
          this.editMenu(doc, state, state.pendingEdit, alternatives),
        );
      }
    }
  }

  private segmentAt(doc: TranscriptDoc, position: number): number | null {
    for (const segment of doc.segments) {
      if (position < segment.end_time) return segment.index;
    }
    return null;
  }

  private wordSpan(
    token: Token,
    segmentIndex: number,
    tokenIndex: number,
    hitKeys: Set<string>,
    currentHit: { segment_index: number; token_index: number } | null,
  ): HTMLElement {
    const el = document.createElement('span');
    el.className = token.kind === 'pronunciation' ? 'word' : 'mark';
    el.textContent = token.content;
    el.dataset.segment = String(segmentIndex);
    el.dataset.token = String(tokenIndex);
    el.title = token.confidence.toFixed(2);

    if (token.kind === 'pronunciation') {
      const opacity = underlineOpacity(token.confidence);
      el.dataset.opacity = String(opacity);
      el.style.borderBottomWidth = '3px';
      el.style.borderBottomStyle = token.human_verified ? 'double' : 'solid';
      el.style.borderBottomColor = `rgba(${UNDERLINE_RGB}, ${opacity})`;
      if (token.human_verified) el.classList.add('verified');
    }

    const key = `${segmentIndex}:${tokenIndex}`;
    if (hitKeys.has(key)) {
      el.classList.add('hit');
      el.style.backgroundColor = HIT_YELLOW;
      if (
        currentHit &&
        currentHit.segment_index === segmentIndex &&
        currentHit.token_index === tokenIndex
      ) {
        el.classList.add('hit-current');
      }
    }

    el.addEventListener('click', () =>
      this.callbacks.onWordClick?.({ segmentIndex, tokenIndex }),
    );
    return el;
  }

  private editMenu(
    doc: TranscriptDoc,
    state: ViewState,
    target: EditTarget,
    alternatives: Alternative[] | null,
  ): HTMLElement {
    if (
      this.guardTarget?.segmentIndex !== target.segmentIndex ||
      this.guardTarget?.tokenIndex !== target.tokenIndex
    ) {
      this.guardDismissed = false;
      this.guardTarget = target;
    }

    const token = doc.segments[target.segmentIndex].tokens[target.tokenIndex];
    const menu = document.createElement('div');
    menu.className = 'edit-menu';

    const heading = document.createElement('div');
    heading.className = 'edit-menu-heading';
    heading.textContent = `edit "${token.content}"`;
    menu.appendChild(heading);

    const input = document.createElement('input');
    input.className = 'edit-input';
    input.value = token.content;
    menu.appendChild(input);

    const guarded = !state.playedSegments.has(target.segmentIndex) && !this.guardDismissed;

    const submit = (kind: EditBody['kind'], content?: string) => {
      this.callbacks.onSubmitEdit?.({
        kind,
        segment_index: target.segmentIndex,
        token_index: target.tokenIndex,
        content,
        source: 'manual',
        expected_revision: doc.revision,
      });
    };
    const buttons: Array<[string, string, () => void]> = [
      ['replace', 'Replace', () => submit('replace', input.value)],
      ['insert', 'Insert after', () => submit('insert', input.value)],
      ['delete', 'Delete', () => submit('delete')],
    ];
    for (const [cls, text, action] of buttons) {
      const button = document.createElement('button');
      button.className = `edit-${cls}`;
      button.textContent = text;
      button.disabled = guarded;
      button.addEventListener('click', action);
      menu.appendChild(button);
    }

    if (guarded) {
      const notice = document.createElement('div');
      notice.className = 'listen-guard';
      notice.textContent = 'Listen to this segment before editing. ';
      const dismiss = document.createElement('button');
      dismiss.className = 'guard-dismiss';
      dismiss.textContent = 'edit anyway';
      dismiss.addEventListener('click', () => {
        this.guardDismissed = true;
        this.render(doc, state, alternatives);
      });
      notice.appendChild(dismiss);
      menu.appendChild(notice);
    }

    // suggestions come from the service's alternatives list; accepting one
    // carries vendor-vetted content, so it is not behind the listen guard
    const list = document.createElement('div');
    list.className = 'alternatives';
    if (alternatives === null) {
      list.textContent = 'loading suggestions…';
    } else {
      for (const alternative of alternatives) {
        if (alternative.content === token.content) continue;
        const button = document.createElement('button');
        button.className = 'alternative';
        button.dataset.content = alternative.content;
        button.textContent = `${alternative.content} (${alternative.confidence.toFixed(2)})`;
        button.addEventListener('click', () =>
          this.callbacks.onSubmitEdit?.({
            kind: 'replace',
            segment_index: target.segmentIndex,
            token_index: target.tokenIndex,
            content: alternative.content,
            source: 'alternative',
            expected_revision: doc.revision,
          }),
        );
        list.appendChild(button);
      }
    }
    menu.appendChild(list);

    const close = document.createElement('button');
    close.className = 'edit-close';
    close.textContent = 'Close';
    close.addEventListener('click', () => this.callbacks.onCloseMenu?.());
    menu.appendChild(close);
    return menu;
  }
}
